//! The declaration format and the emitters: parse a bundled `.ttg` file,
//! round-trip it through the canonical renderer, and emit the JSON report
//! and the DOT drawing of its spaces and maps.
//!
//! Run with: cargo run --example dsl_and_formats

use ttg::cli::file_report;
use ttg::dsl;
use ttg::report::emit_dot;

fn main() -> ttg::Result<()> {
    let path = format!("{}/fixtures/p1_objects.ttg", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).expect("bundled fixture");
    let file = dsl::parse(&text)?;

    println!("canonical form:\n{}", file.render());
    let reparsed = dsl::parse(&file.render())?;
    assert_eq!(file, reparsed, "parse and render are inverse");

    let a = file.object("a").expect("declared object");
    println!(
        "object {} has support {}",
        a.name,
        a.object.base().render_set(a.object.supp())
    );

    println!("\njson report:\n{}", file_report(&file).to_json());
    println!("\ndot:\n{}", emit_dot(&file));
    Ok(())
}
