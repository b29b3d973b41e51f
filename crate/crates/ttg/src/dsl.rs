//! Declaration format for spaces, maps, support data and objects, plus the
//! canonical renderer. Files use the `.ttg` extension.
//!
//! ```text
//! # comments run to end of line
//! space S { points: x y z ; order: y < x, z < x ; }
//! space X { points: yh zh ; order: ; }
//! map eta : X -> S { yh -> y, zh -> z }
//! support sigma = pullback(eta)
//! support tau = table { {y} -> {yh} ; {z} -> {zh} ; {x y z} -> {yh zh} ; }
//! object one = compact {x y z}
//! object a = l(sigma, {yh}) * one
//! ```
//!
//! `a < b` declares `a ∈ closure{b}`; the reflexive-transitive closure of
//! the declared pairs is taken on load and antisymmetry violations are
//! rejected. Every identifier must be declared before use and point names
//! are global to the file, so set literals determine their space. Table
//! entries must cover every principal closed set of the base; additional
//! entries are checked for union-consistency against the principal ones.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rickard::{BigObject, IdempotentSpec};
use crate::space::{FinSpace, PointSet, SpaceMap};
use crate::support::SupportDatum;

/// A named support declaration.
#[derive(Clone, Debug, PartialEq)]
pub struct NamedSupport {
    pub name: String,
    pub datum: Arc<SupportDatum>,
}

/// Declaration-level form of an object, keeping operand names for rendering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ObjectDecl {
    Compact { set: Vec<String> },
    Gamma { support: String, set: Vec<String>, operand: String },
    L { support: String, set: Vec<String>, operand: String },
    GammaPoint { support: String, point: String, operand: String },
    Sum { left: String, right: String },
}

/// A named object declaration together with its materialized value.
#[derive(Clone, Debug, PartialEq)]
pub struct NamedObject {
    pub name: String,
    pub decl: ObjectDecl,
    pub object: BigObject,
}

/// A parsed workbench file.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct WorkbenchFile {
    pub spaces: Vec<Arc<FinSpace>>,
    pub maps: Vec<SpaceMap>,
    pub supports: Vec<NamedSupport>,
    pub objects: Vec<NamedObject>,
}

impl WorkbenchFile {
    pub fn space(&self, name: &str) -> Option<&Arc<FinSpace>> {
        self.spaces.iter().find(|s| s.name() == name)
    }

    pub fn map(&self, name: &str) -> Option<&SpaceMap> {
        self.maps.iter().find(|m| m.name() == name)
    }

    pub fn support(&self, name: &str) -> Option<&NamedSupport> {
        self.supports.iter().find(|s| s.name == name)
    }

    pub fn object(&self, name: &str) -> Option<&NamedObject> {
        self.objects.iter().find(|o| o.name == name)
    }

    /// Canonical rendering, one declaration per line; parsing it back yields
    /// an identical structure.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for space in &self.spaces {
            let _ = writeln!(out, "{}", space.render());
        }
        for map in &self.maps {
            let _ = writeln!(out, "{}", map.render());
        }
        for support in &self.supports {
            let _ = writeln!(out, "{}", support.datum.render_decl(&support.name));
        }
        for object in &self.objects {
            let _ = writeln!(out, "{}", render_object_decl(&object.name, &object.decl));
        }
        out
    }
}

fn render_set_names(names: &[String]) -> String {
    let mut out = String::from("{");
    for (i, n) in names.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push_str(n);
    }
    out.push('}');
    out
}

fn render_object_decl(name: &str, decl: &ObjectDecl) -> String {
    match decl {
        ObjectDecl::Compact { set } => format!("object {name} = compact {}", render_set_names(set)),
        ObjectDecl::Gamma {
            support,
            set,
            operand,
        } => format!(
            "object {name} = gamma({support}, {}) * {operand}",
            render_set_names(set)
        ),
        ObjectDecl::L {
            support,
            set,
            operand,
        } => format!(
            "object {name} = l({support}, {}) * {operand}",
            render_set_names(set)
        ),
        ObjectDecl::GammaPoint {
            support,
            point,
            operand,
        } => format!("object {name} = gammapt({support}, {point}) * {operand}"),
        ObjectDecl::Sum { left, right } => format!("object {name} = sum({left}, {right})"),
    }
}

// ---------------------------------------------------------------------------
// lexer

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Colon,
    Semi,
    Comma,
    Arrow,
    Less,
    Equals,
    Star,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = match line.find('#') {
            Some(pos) => &line[..pos],
            None => line,
        };
        let mut chars = line.char_indices().peekable();
        while let Some(&(col, c)) = chars.peek() {
            let at = |t: Tok| Token {
                tok: t,
                line: lineno + 1,
                col: col + 1,
            };
            match c {
                c if c.is_whitespace() => {
                    chars.next();
                }
                '{' => {
                    tokens.push(at(Tok::LBrace));
                    chars.next();
                }
                '}' => {
                    tokens.push(at(Tok::RBrace));
                    chars.next();
                }
                '(' => {
                    tokens.push(at(Tok::LParen));
                    chars.next();
                }
                ')' => {
                    tokens.push(at(Tok::RParen));
                    chars.next();
                }
                ':' => {
                    tokens.push(at(Tok::Colon));
                    chars.next();
                }
                ';' => {
                    tokens.push(at(Tok::Semi));
                    chars.next();
                }
                ',' => {
                    tokens.push(at(Tok::Comma));
                    chars.next();
                }
                '<' => {
                    tokens.push(at(Tok::Less));
                    chars.next();
                }
                '=' => {
                    tokens.push(at(Tok::Equals));
                    chars.next();
                }
                '*' => {
                    tokens.push(at(Tok::Star));
                    chars.next();
                }
                '-' => {
                    chars.next();
                    match chars.peek() {
                        Some(&(_, '>')) => {
                            tokens.push(at(Tok::Arrow));
                            chars.next();
                        }
                        _ => {
                            return Err(Error::Parse {
                                line: lineno + 1,
                                col: col + 1,
                                msg: "expected -> after -".to_string(),
                            })
                        }
                    }
                }
                c if c.is_alphanumeric() || c == '_' => {
                    let mut ident = String::new();
                    while let Some(&(_, c)) = chars.peek() {
                        if c.is_alphanumeric() || c == '_' {
                            ident.push(c);
                            chars.next();
                        } else {
                            break;
                        }
                    }
                    tokens.push(Token {
                        tok: Tok::Ident(ident),
                        line: lineno + 1,
                        col: col + 1,
                    });
                }
                other => {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        col: col + 1,
                        msg: format!("unexpected character {other:?}"),
                    })
                }
            }
        }
    }
    Ok(tokens)
}

// ---------------------------------------------------------------------------
// parser

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    file: WorkbenchFile,
    /// point name -> index of owning space in `file.spaces`
    point_owner: BTreeMap<String, usize>,
}

pub fn parse(text: &str) -> Result<WorkbenchFile> {
    let mut parser = Parser {
        tokens: lex(text)?,
        pos: 0,
        file: WorkbenchFile::default(),
        point_owner: BTreeMap::new(),
    };
    parser.run()?;
    Ok(parser.file)
}

impl Parser {
    fn run(&mut self) -> Result<()> {
        while self.pos < self.tokens.len() {
            let (keyword, line, col) = self.expect_ident("declaration keyword")?;
            match keyword.as_str() {
                "space" => self.parse_space()?,
                "map" => self.parse_map()?,
                "support" => self.parse_support()?,
                "object" => self.parse_object()?,
                other => {
                    return Err(Error::Parse {
                        line,
                        col,
                        msg: format!(
                            "expected space, map, support or object, found {other}"
                        ),
                    })
                }
            }
        }
        Ok(())
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn location(&self) -> (usize, usize) {
        match self.peek() {
            Some(t) => (t.line, t.col),
            None => self
                .tokens
                .last()
                .map(|t| (t.line, t.col + 1))
                .unwrap_or((1, 1)),
        }
    }

    fn parse_err(&self, msg: impl Into<String>) -> Error {
        let (line, col) = self.location();
        Error::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn semantic_err(&self, line: usize, col: usize, msg: impl Into<String>) -> Error {
        Error::Semantic {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn next(&mut self, expected: &str) -> Result<Token> {
        let token = self
            .tokens
            .get(self.pos)
            .cloned()
            .ok_or_else(|| self.parse_err(format!("expected {expected}, found end of input")))?;
        self.pos += 1;
        Ok(token)
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<Token> {
        let token = self.next(expected)?;
        if token.tok != tok {
            return Err(Error::Parse {
                line: token.line,
                col: token.col,
                msg: format!("expected {expected}, found {:?}", token.tok),
            });
        }
        Ok(token)
    }

    fn expect_ident(&mut self, expected: &str) -> Result<(String, usize, usize)> {
        let token = self.next(expected)?;
        match token.tok {
            Tok::Ident(s) => Ok((s, token.line, token.col)),
            other => Err(Error::Parse {
                line: token.line,
                col: token.col,
                msg: format!("expected {expected}, found {other:?}"),
            }),
        }
    }

    fn check_fresh_name(&self, name: &str, line: usize, col: usize) -> Result<()> {
        let taken = self.file.space(name).is_some()
            || self.file.map(name).is_some()
            || self.file.support(name).is_some()
            || self.file.object(name).is_some()
            || self.point_owner.contains_key(name);
        if taken {
            return Err(self.semantic_err(line, col, format!("identifier {name} already declared")));
        }
        Ok(())
    }

    // space NAME { points: p1 p2 ... ; order: a < b, c < d ; }
    fn parse_space(&mut self) -> Result<()> {
        let (name, nline, ncol) = self.expect_ident("space name")?;
        self.check_fresh_name(&name, nline, ncol)?;
        self.expect(Tok::LBrace, "{")?;
        let (points_kw, kline, kcol) = self.expect_ident("points")?;
        if points_kw != "points" {
            return Err(Error::Parse {
                line: kline,
                col: kcol,
                msg: format!("expected points, found {points_kw}"),
            });
        }
        self.expect(Tok::Colon, ":")?;
        let mut points = Vec::new();
        let mut point_locs = Vec::new();
        loop {
            match self.peek().map(|t| t.tok.clone()) {
                Some(Tok::Ident(_)) => {
                    let (p, pline, pcol) = self.expect_ident("point name")?;
                    points.push(p);
                    point_locs.push((pline, pcol));
                }
                Some(Tok::Semi) => {
                    self.pos += 1;
                    break;
                }
                _ => return Err(self.parse_err("expected point name or ;")),
            }
        }
        if points.is_empty() {
            return Err(Error::Parse {
                line: kline,
                col: kcol,
                msg: format!("space {name}: empty point list"),
            });
        }
        for (i, p) in points.iter().enumerate() {
            let (pline, pcol) = point_locs[i];
            if points[..i].contains(p) {
                return Err(self.semantic_err(pline, pcol, format!("duplicate point {p}")));
            }
            if self.point_owner.contains_key(p) {
                return Err(self.semantic_err(
                    pline,
                    pcol,
                    format!("point {p} already belongs to another space"),
                ));
            }
            self.check_fresh_name(p, pline, pcol)?;
        }

        let (order_kw, oline, ocol) = self.expect_ident("order")?;
        if order_kw != "order" {
            return Err(Error::Parse {
                line: oline,
                col: ocol,
                msg: format!("expected order, found {order_kw}"),
            });
        }
        self.expect(Tok::Colon, ":")?;
        let mut relations: Vec<(String, String)> = Vec::new();
        loop {
            match self.peek().map(|t| t.tok.clone()) {
                Some(Tok::Semi) => {
                    self.pos += 1;
                    break;
                }
                Some(Tok::Ident(_)) => {
                    let (a, aline, acol) = self.expect_ident("point name")?;
                    if !points.contains(&a) {
                        return Err(self.semantic_err(
                            aline,
                            acol,
                            format!("unknown point {a} in order relation"),
                        ));
                    }
                    self.expect(Tok::Less, "<")?;
                    let (b, bline, bcol) = self.expect_ident("point name")?;
                    if !points.contains(&b) {
                        return Err(self.semantic_err(
                            bline,
                            bcol,
                            format!("unknown point {b} in order relation"),
                        ));
                    }
                    relations.push((a, b));
                    if let Some(Tok::Comma) = self.peek().map(|t| t.tok.clone()) {
                        self.pos += 1;
                    }
                }
                _ => return Err(self.parse_err("expected order relation or ;")),
            }
        }
        self.expect(Tok::RBrace, "}")?;

        let point_refs: Vec<&str> = points.iter().map(|s| s.as_str()).collect();
        let relation_refs: Vec<(&str, &str)> = relations
            .iter()
            .map(|(a, b)| (a.as_str(), b.as_str()))
            .collect();
        let space = FinSpace::new(&name, &point_refs, &relation_refs)
            .map_err(|e| self.semantic_err(nline, ncol, e.to_string()))?;
        let space_index = self.file.spaces.len();
        for p in points {
            self.point_owner.insert(p, space_index);
        }
        self.file.spaces.push(space);
        Ok(())
    }

    // map NAME : X -> S { x -> s, ... }
    fn parse_map(&mut self) -> Result<()> {
        let (name, nline, ncol) = self.expect_ident("map name")?;
        self.check_fresh_name(&name, nline, ncol)?;
        self.expect(Tok::Colon, ":")?;
        let (dom_name, dline, dcol) = self.expect_ident("domain space")?;
        let domain = self
            .file
            .space(&dom_name)
            .cloned()
            .ok_or_else(|| self.semantic_err(dline, dcol, format!("unknown space {dom_name}")))?;
        self.expect(Tok::Arrow, "->")?;
        let (cod_name, cline, ccol) = self.expect_ident("codomain space")?;
        let codomain = self
            .file
            .space(&cod_name)
            .cloned()
            .ok_or_else(|| self.semantic_err(cline, ccol, format!("unknown space {cod_name}")))?;
        self.expect(Tok::LBrace, "{")?;
        let mut pairs: Vec<(String, String)> = Vec::new();
        loop {
            match self.peek().map(|t| t.tok.clone()) {
                Some(Tok::RBrace) => {
                    self.pos += 1;
                    break;
                }
                Some(Tok::Ident(_)) => {
                    let (from, _, _) = self.expect_ident("point name")?;
                    self.expect(Tok::Arrow, "->")?;
                    let (to, _, _) = self.expect_ident("point name")?;
                    pairs.push((from, to));
                    if let Some(Tok::Comma) = self.peek().map(|t| t.tok.clone()) {
                        self.pos += 1;
                    }
                }
                _ => return Err(self.parse_err("expected point mapping or }")),
            }
        }
        let pair_refs: Vec<(&str, &str)> = pairs
            .iter()
            .map(|(a, b)| (a.as_str(), b.as_str()))
            .collect();
        let map = SpaceMap::from_pairs(&name, domain, codomain, &pair_refs)
            .map_err(|e| self.semantic_err(nline, ncol, e.to_string()))?;
        if !map.is_monotone() {
            return Err(self.semantic_err(nline, ncol, format!("map {name} not continuous")));
        }
        self.file.maps.push(map);
        Ok(())
    }

    // support NAME = pullback(MAP) | pushforward(MAP) | table { W -> V ; ... }
    fn parse_support(&mut self) -> Result<()> {
        let (name, nline, ncol) = self.expect_ident("support name")?;
        self.check_fresh_name(&name, nline, ncol)?;
        self.expect(Tok::Equals, "=")?;
        let (kind, kline, kcol) = self.expect_ident("pullback, pushforward or table")?;
        let datum = match kind.as_str() {
            "pullback" | "pushforward" => {
                self.expect(Tok::LParen, "(")?;
                let (map_name, mline, mcol) = self.expect_ident("map name")?;
                self.expect(Tok::RParen, ")")?;
                let map = self
                    .file
                    .map(&map_name)
                    .cloned()
                    .ok_or_else(|| {
                        self.semantic_err(mline, mcol, format!("unknown map {map_name}"))
                    })?;
                let built = if kind == "pullback" {
                    SupportDatum::pullback(map)
                } else {
                    SupportDatum::pushforward(map)
                };
                built.map_err(|e| self.semantic_err(mline, mcol, e.to_string()))?
            }
            "table" => self.parse_table(nline, ncol)?,
            other => {
                return Err(Error::Parse {
                    line: kline,
                    col: kcol,
                    msg: format!("expected pullback, pushforward or table, found {other}"),
                })
            }
        };
        self.file.supports.push(NamedSupport { name, datum });
        Ok(())
    }

    fn parse_table(&mut self, nline: usize, ncol: usize) -> Result<Arc<SupportDatum>> {
        // (key set, owning space), (value set, owning space), entry location
        type TableEntry = ((PointSet, usize), (PointSet, usize), (usize, usize));
        self.expect(Tok::LBrace, "{")?;
        let mut entries: Vec<TableEntry> = Vec::new();
        loop {
            match self.peek().map(|t| t.tok.clone()) {
                Some(Tok::RBrace) => {
                    self.pos += 1;
                    break;
                }
                Some(Tok::LBrace) => {
                    let (kline, kcol) = self.location();
                    let key = self.parse_set_literal()?;
                    self.expect(Tok::Arrow, "->")?;
                    let value = self.parse_set_literal()?;
                    self.expect(Tok::Semi, ";")?;
                    entries.push((key, value, (kline, kcol)));
                }
                _ => return Err(self.parse_err("expected table entry or }")),
            }
        }
        if entries.is_empty() {
            return Err(self.semantic_err(nline, ncol, "table needs at least one entry"));
        }
        let base_index = entries[0].0 .1;
        let mut target_index = usize::MAX;
        for ((_, key_space), (_, value_space), (eline, ecol)) in &entries {
            if *key_space != base_index {
                return Err(self.semantic_err(
                    *eline,
                    *ecol,
                    "table keys mix points from different spaces",
                ));
            }
            if *value_space != usize::MAX {
                if target_index == usize::MAX {
                    target_index = *value_space;
                } else if target_index != *value_space {
                    return Err(self.semantic_err(
                        *eline,
                        *ecol,
                        "table values mix points from different spaces",
                    ));
                }
            }
        }
        if base_index == usize::MAX {
            return Err(self.semantic_err(nline, ncol, "cannot infer base space: all keys empty"));
        }
        if target_index == usize::MAX {
            return Err(self.semantic_err(
                nline,
                ncol,
                "cannot infer target space: all values empty",
            ));
        }
        let base = Arc::clone(&self.file.spaces[base_index]);
        let target = Arc::clone(&self.file.spaces[target_index]);

        // every principal closed set of the base must appear as a key;
        // any other keys are checked for union-consistency afterwards
        let mut principal: Vec<Option<PointSet>> = vec![None; base.len()];
        let mut extras: Vec<(PointSet, PointSet, (usize, usize))> = Vec::new();
        for ((key, _), (value, _), loc) in &entries {
            if !base.is_down_set(*key) {
                return Err(self.semantic_err(
                    loc.0,
                    loc.1,
                    format!("table key {} is not closed", base.render_set(*key)),
                 ));
            }
            if !target.is_down_set(*value) {
                return Err(self.semantic_err(
                    loc.0,
                    loc.1,
                    format!("table value {} is not closed", target.render_set(*value)),
                ));
            }
            let generic = base.generic_points(*key).expect("closed set");
            if generic.len() == 1 && *key == base.v_of(generic.iter().next().unwrap()).unwrap() {
                let p = generic.iter().next().unwrap();
                if let Some(prev) = principal[p] {
                    if prev != *value {
                        return Err(self.semantic_err(
                            loc.0,
                            loc.1,
                            format!("conflicting table entries for {}", base.render_set(*key)),
                        ));
                    }
                } else {
                    principal[p] = Some(*value);
                }
            } else {
                extras.push((*key, *value, *loc));
            }
        }
        let principal: Vec<PointSet> = principal
            .into_iter()
            .enumerate()
            .map(|(p, v)| {
                v.ok_or_else(|| {
                    self.semantic_err(
                        nline,
                        ncol,
                        format!(
                            "table is missing the principal entry {}",
                            base.render_set(base.v_of(p).unwrap())
                        ),
                    )
                })
            })
            .collect::<Result<_>>()?;
        let datum = SupportDatum::table(base.clone(), target, principal)
            .map_err(|e| self.semantic_err(nline, ncol, e.to_string()))?;
        for (key, value, loc) in extras {
            if datum.sigma(key) != value {
                return Err(self.semantic_err(
                    loc.0,
                    loc.1,
                    format!(
                        "table entry {} -> {} contradicts the union of principal entries",
                        base.render_set(key),
                        datum.target().render_set(value)
                    ),
                ));
            }
        }
        Ok(datum)
    }

    /// `{p1 p2 ...}` — returns the set and its owning space index
    /// (`usize::MAX` when empty).
    fn parse_set_literal(&mut self) -> Result<(PointSet, usize)> {
        self.expect(Tok::LBrace, "{")?;
        let mut set = PointSet::EMPTY;
        let mut owner = usize::MAX;
        loop {
            match self.peek().map(|t| t.tok.clone()) {
                Some(Tok::RBrace) => {
                    self.pos += 1;
                    break;
                }
                Some(Tok::Ident(_)) => {
                    let (p, pline, pcol) = self.expect_ident("point name")?;
                    let space_index = *self.point_owner.get(&p).ok_or_else(|| {
                        self.semantic_err(pline, pcol, format!("unknown point {p}"))
                    })?;
                    if owner == usize::MAX {
                        owner = space_index;
                    } else if owner != space_index {
                        return Err(self.semantic_err(
                            pline,
                            pcol,
                            format!("point {p} belongs to a different space"),
                        ));
                    }
                    let index = self.file.spaces[space_index]
                        .point_index(&p)
                        .expect("owner is consistent");
                    set.insert(index);
                }
                _ => return Err(self.parse_err("expected point name or }")),
            }
        }
        Ok((set, owner))
    }

    // object NAME = compact {set} | gamma(S, {set}) * NAME | l(S, {set}) * NAME
    //             | gammapt(S, x) * NAME | sum(NAME, NAME)
    fn parse_object(&mut self) -> Result<()> {
        let (name, nline, ncol) = self.expect_ident("object name")?;
        self.check_fresh_name(&name, nline, ncol)?;
        self.expect(Tok::Equals, "=")?;
        let (head, hline, hcol) = self.expect_ident("object constructor")?;
        let (decl, object) = match head.as_str() {
            "compact" => {
                let (loc_line, loc_col) = self.location();
                let (set, owner) = self.parse_set_literal()?;
                if owner == usize::MAX {
                    return Err(self.semantic_err(
                        loc_line,
                        loc_col,
                        "cannot infer the space of an empty compact set",
                    ));
                }
                let space = Arc::clone(&self.file.spaces[owner]);
                let names = set_names(&space, set);
                let object = BigObject::compact(space, set)
                    .map_err(|e| self.semantic_err(loc_line, loc_col, e.to_string()))?;
                (ObjectDecl::Compact { set: names }, object)
            }
            "gamma" | "l" | "gammapt" => {
                self.expect(Tok::LParen, "(")?;
                let (support_name, sline, scol) = self.expect_ident("support name")?;
                let support = self
                    .file
                    .support(&support_name)
                    .cloned()
                    .ok_or_else(|| {
                        self.semantic_err(sline, scol, format!("unknown support {support_name}"))
                    })?;
                self.expect(Tok::Comma, ",")?;
                let idem = if head == "gammapt" {
                    let (point, pline, pcol) = self.expect_ident("point name")?;
                    let index = support
                        .datum
                        .target()
                        .point_index(&point)
                        .map_err(|e| self.semantic_err(pline, pcol, e.to_string()))?;
                    IdempotentSpec::gamma_point(Arc::clone(&support.datum), index)
                        .map_err(|e| self.semantic_err(pline, pcol, e.to_string()))?
                } else {
                    let (line, col) = self.location();
                    let (set, owner) = self.parse_set_literal()?;
                    if owner != usize::MAX {
                        let scope_space = &self.file.spaces[owner];
                        if scope_space != support.datum.target() {
                            return Err(self.semantic_err(
                                line,
                                col,
                                format!(
                                    "idempotent scope uses points of {} but support {} targets {}",
                                    scope_space.name(),
                                    support_name,
                                    support.datum.target().name()
                                ),
                            ));
                        }
                    }
                    let build = if head == "gamma" {
                        IdempotentSpec::gamma_ideal
                    } else {
                        IdempotentSpec::l_ideal
                    };
                    build(Arc::clone(&support.datum), set)
                        .map_err(|e| self.semantic_err(line, col, e.to_string()))?
                };
                self.expect(Tok::RParen, ")")?;
                self.expect(Tok::Star, "*")?;
                let (operand_name, oline, ocol) = self.expect_ident("object name")?;
                let operand = self
                    .file
                    .object(&operand_name)
                    .cloned()
                    .ok_or_else(|| {
                        self.semantic_err(oline, ocol, format!("unknown object {operand_name}"))
                    })?;
                let object = operand
                    .object
                    .clone()
                    .tensor_idem(idem.clone())
                    .map_err(|e| self.semantic_err(oline, ocol, e.to_string()))?;
                let decl = match (head.as_str(), idem.scope()) {
                    ("gamma", crate::rickard::IdempotentScope::Ideal(v)) => ObjectDecl::Gamma {
                        support: support_name,
                        set: set_names(support.datum.target(), v),
                        operand: operand_name,
                    },
                    ("l", crate::rickard::IdempotentScope::Ideal(v)) => ObjectDecl::L {
                        support: support_name,
                        set: set_names(support.datum.target(), v),
                        operand: operand_name,
                    },
                    ("gammapt", crate::rickard::IdempotentScope::Point(x)) => {
                        ObjectDecl::GammaPoint {
                            support: support_name,
                            point: support.datum.target().point_name(x).to_string(),
                            operand: operand_name,
                        }
                    }
                    _ => unreachable!("constructor and scope always match"),
                };
                (decl, object)
            }
            "sum" => {
                self.expect(Tok::LParen, "(")?;
                let (left_name, lline, lcol) = self.expect_ident("object name")?;
                self.expect(Tok::Comma, ",")?;
                let (right_name, rline, rcol) = self.expect_ident("object name")?;
                self.expect(Tok::RParen, ")")?;
                let left = self
                    .file
                    .object(&left_name)
                    .cloned()
                    .ok_or_else(|| {
                        self.semantic_err(lline, lcol, format!("unknown object {left_name}"))
                    })?;
                let right = self
                    .file
                    .object(&right_name)
                    .cloned()
                    .ok_or_else(|| {
                        self.semantic_err(rline, rcol, format!("unknown object {right_name}"))
                    })?;
                let object = BigObject::sum(left.object.clone(), right.object.clone())
                    .map_err(|e| self.semantic_err(rline, rcol, e.to_string()))?;
                (
                    ObjectDecl::Sum {
                        left: left_name,
                        right: right_name,
                    },
                    object,
                )
            }
            other => {
                return Err(Error::Parse {
                    line: hline,
                    col: hcol,
                    msg: format!("expected compact, gamma, l, gammapt or sum, found {other}"),
                })
            }
        };
        self.file.objects.push(NamedObject { name, decl, object });
        Ok(())
    }
}

fn set_names(space: &FinSpace, set: PointSet) -> Vec<String> {
    set.iter().map(|i| space.point_name(i).to_string()).collect()
}
