use std::io::Write as _;

fn main() {
    let (code, output) = ttg::cli::run_command(std::env::args());
    let mut stdout = std::io::stdout();
    let _ = stdout.write_all(output.as_bytes());
    let _ = stdout.flush();
    std::process::exit(code);
}
