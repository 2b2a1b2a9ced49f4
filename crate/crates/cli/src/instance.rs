//! The sectioned instance-file format.
//!
//! ```text
//! # comments start with '#'
//! OPTIONS
//!   dmax 4
//!   denominator 2
//! RING X
//!   gen H 1
//!   rel H^3
//! RING Y
//!   gen h 1
//!   rel h^2
//! MAP i pull X Y
//!   H -> h
//! MAP i_lower push Y X shift 1
//!   1 -> H
//!   h -> H^2
//! CENTER
//!   ideal x weight 2 codim 1
//!   chern h
//!   class H
//!   fundamental H
//! ```
//!
//! The source of the `pull` map is `X`, its target `Y`. `chern` and `class`
//! apply to the most recent `ideal`; `chern` takes a comma-separated list
//! `c_1, …, c_r`. Push images not listed are zero.

use std::collections::BTreeMap;
use std::fmt;

use sbw_core::graded::{parse_polynomial, Homogeneity};
use sbw_core::{BlowupError, Degree, IdealData, InstanceData, Rational, RingData};

/// A position-tagged error.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum InstanceError {
    #[error("parse error at {0}")]
    Syntax(Diagnostic),
    #[error("validation error{}: {source}", .line.map(|l| format!(" (line {l})")).unwrap_or_default())]
    Validation {
        line: Option<usize>,
        #[source]
        source: BlowupError,
    },
}

/// A piece of text with the 1-based position of its first character.
#[derive(Clone, Debug)]
struct Span {
    text: String,
    line: usize,
    column: usize,
}

impl Span {
    fn err(&self, message: impl Into<String>) -> InstanceError {
        InstanceError::Syntax(Diagnostic { line: self.line, column: self.column, message: message.into() })
    }
}

#[derive(Default)]
struct RawRing {
    gens: Vec<(Span, Span)>,
    rels: Vec<Span>,
}

struct RawMap {
    line: usize,
    name: String,
    pull: bool,
    source: Span,
    target: Span,
    shift: Option<Span>,
    entries: Vec<(Span, Span)>,
}

struct RawIdeal {
    line: usize,
    name: String,
    weight: i64,
    codim: usize,
    chern: Option<Vec<Span>>,
    class: Option<Span>,
}

#[derive(Default)]
struct RawCenter {
    line: usize,
    ideals: Vec<RawIdeal>,
    fundamental: Option<Span>,
}

enum Block {
    None,
    Options,
    Ring(String),
    Map(usize),
    Center,
}

/// Splits a line into whitespace-separated words with columns.
fn words(line: &str, lineno: usize) -> Vec<Span> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push(Span { text: line[s..i].to_string(), line: lineno, column: line[..s].chars().count() + 1 });
                start = None;
            }
            _ => {}
        }
    }
    out
}

/// The rest of the line after the first `n` words, as one span.
fn rest_after(line: &str, ws: &[Span], n: usize, lineno: usize) -> Option<Span> {
    let w = ws.get(n)?;
    let byte = line.char_indices().nth(w.column - 1).map_or(line.len(), |(b, _)| b);
    Some(Span { text: line[byte..].trim_end().to_string(), line: lineno, column: w.column })
}

fn parse_int<T: std::str::FromStr>(s: &Span, what: &str) -> Result<T, InstanceError> {
    s.text.parse().map_err(|_| s.err(format!("expected an integer for {what}, found `{}`", s.text)))
}

fn parse_rational(s: &Span, what: &str) -> Result<Rational, InstanceError> {
    s.text.parse().map_err(|_| s.err(format!("expected a rational p/q for {what}, found `{}`", s.text)))
}

/// Parses an expression over the given names, mapping offsets to columns.
fn check_expr(s: &Span, names: &[&str]) -> Result<sbw_core::Polynomial, InstanceError> {
    parse_polynomial(&s.text, names).map_err(|e| {
        let col = s.column + s.text[..e.offset.min(s.text.len())].chars().count();
        InstanceError::Syntax(Diagnostic { line: s.line, column: col, message: e.message })
    })
}

/// A parsed instance file.
#[derive(Clone, Debug)]
pub struct InstanceFile {
    pub data: InstanceData,
    /// Source lines of the blocks, for validation diagnostics.
    pub push_line: usize,
    pub pull_line: usize,
    pub center_line: usize,
}

impl InstanceFile {
    /// Validates and builds the blowup instance.
    pub fn build(&self) -> Result<sbw_core::BlowupInstance, InstanceError> {
        self.data.build().map_err(|e| {
            let line = match &e {
                BlowupError::ProjectionFormula { .. }
                | BlowupError::FundamentalClass { .. }
                | BlowupError::PushKey(_)
                | BlowupError::ExcessIntersection { .. }
                | BlowupError::ShiftMismatch { .. } => Some(self.push_line),
                BlowupError::PullCount { .. } => Some(self.pull_line),
                BlowupError::SelfIntersection { .. }
                | BlowupError::ChernCount { .. }
                | BlowupError::ChernDegree { .. }
                | BlowupError::ClassDegree { .. }
                | BlowupError::YClassDegree { .. }
                | BlowupError::BadWeight { .. }
                | BlowupError::NoCenter => Some(self.center_line),
                _ => None,
            };
            InstanceError::Validation { line, source: e }
        })
    }
}

/// Parses the text of an instance file. `dmax` overrides the file's bound.
pub fn parse(text: &str, dmax: Option<Rational>) -> Result<InstanceFile, InstanceError> {
    let mut options: BTreeMap<String, Span> = BTreeMap::new();
    let mut rings: BTreeMap<String, RawRing> = BTreeMap::new();
    let mut maps: Vec<RawMap> = Vec::new();
    let mut center: Option<RawCenter> = None;
    let mut block = Block::None;

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("");
        let ws = words(line, lineno);
        let Some(head) = ws.first() else { continue };
        match head.text.as_str() {
            "OPTIONS" => {
                block = Block::Options;
                continue;
            }
            "RING" => {
                let name = ws.get(1).ok_or_else(|| head.err("RING needs a name"))?;
                if ws.len() > 2 {
                    return Err(ws[2].err("unexpected text after the ring name"));
                }
                if rings.contains_key(&name.text) {
                    return Err(name.err(format!("ring `{}` declared twice", name.text)));
                }
                rings.insert(name.text.clone(), RawRing::default());
                block = Block::Ring(name.text.clone());
                continue;
            }
            "MAP" => {
                if ws.len() < 5 {
                    return Err(head.err("expected `MAP <name> pull|push <source> <target> [shift <k>]`"));
                }
                let pull = match ws[2].text.as_str() {
                    "pull" => true,
                    "push" => false,
                    _ => return Err(ws[2].err("map kind must be `pull` or `push`")),
                };
                let shift = match ws.get(5) {
                    None => None,
                    Some(w) if w.text == "shift" => Some(ws.get(6).ok_or_else(|| w.err("`shift` needs a value"))?.clone()),
                    Some(w) => return Err(w.err("expected `shift`")),
                };
                maps.push(RawMap {
                    line: lineno,
                    name: ws[1].text.clone(),
                    pull,
                    source: ws[3].clone(),
                    target: ws[4].clone(),
                    shift,
                    entries: Vec::new(),
                });
                block = Block::Map(maps.len() - 1);
                continue;
            }
            "CENTER" => {
                if center.is_some() {
                    return Err(head.err("more than one CENTER block"));
                }
                center = Some(RawCenter { line: lineno, ..Default::default() });
                block = Block::Center;
                continue;
            }
            _ => {}
        }
        match &block {
            Block::None => return Err(head.err("expected OPTIONS, RING, MAP or CENTER")),
            Block::Options => {
                let v = ws.get(1).ok_or_else(|| head.err("option needs a value"))?;
                if !matches!(head.text.as_str(), "dmax" | "denominator") {
                    return Err(head.err(format!("unknown option `{}`", head.text)));
                }
                options.insert(head.text.clone(), v.clone());
            }
            Block::Ring(name) => {
                let r = rings.get_mut(name).expect("declared");
                match head.text.as_str() {
                    "gen" => {
                        if ws.len() != 3 {
                            return Err(head.err("expected `gen <name> <degree>`"));
                        }
                        r.gens.push((ws[1].clone(), ws[2].clone()));
                    }
                    "rel" => r.rels.push(rest_after(line, &ws, 1, lineno).ok_or_else(|| head.err("empty relation"))?),
                    _ => return Err(head.err("expected `gen` or `rel`")),
                }
            }
            Block::Map(k) => {
                let full = rest_after(line, &ws, 0, lineno).expect("nonempty");
                let Some(pos) = full.text.find("->") else {
                    return Err(head.err("expected `<source> -> <image>`"));
                };
                let lhs = Span { text: full.text[..pos].trim().to_string(), line: lineno, column: full.column };
                let rtext = &full.text[pos + 2..];
                let lead = rtext.len() - rtext.trim_start().len();
                let rcol = full.column + full.text[..pos + 2 + lead].chars().count();
                let rhs = Span { text: rtext.trim().to_string(), line: lineno, column: rcol };
                if rhs.text.is_empty() {
                    return Err(rhs.err("missing image"));
                }
                maps[*k].entries.push((lhs, rhs));
            }
            Block::Center => {
                let c = center.as_mut().expect("open");
                match head.text.as_str() {
                    "ideal" => {
                        // ideal <name> weight <b> codim <r>
                        if ws.len() != 6 || ws[2].text != "weight" || ws[4].text != "codim" {
                            return Err(head.err("expected `ideal <name> weight <b> codim <r>`"));
                        }
                        c.ideals.push(RawIdeal {
                            line: lineno,
                            name: ws[1].text.clone(),
                            weight: parse_int(&ws[3], "the weight")?,
                            codim: parse_int(&ws[5], "the codimension")?,
                            chern: None,
                            class: None,
                        });
                    }
                    "chern" | "class" => {
                        let ideal = c.ideals.last_mut().ok_or_else(|| head.err("`ideal` must come first"))?;
                        let rest = rest_after(line, &ws, 1, lineno).ok_or_else(|| head.err("missing expression"))?;
                        if head.text == "class" {
                            ideal.class = Some(rest);
                        } else {
                            let mut list = Vec::new();
                            let mut offset = 0;
                            for piece in rest.text.split(',') {
                                let lead = piece.len() - piece.trim_start().len();
                                let col = rest.column + rest.text[..offset + lead].chars().count();
                                list.push(Span { text: piece.trim().to_string(), line: lineno, column: col });
                                offset += piece.len() + 1;
                            }
                            ideal.chern = Some(list);
                        }
                    }
                    "fundamental" => {
                        c.fundamental =
                            Some(rest_after(line, &ws, 1, lineno).ok_or_else(|| head.err("missing expression"))?);
                    }
                    _ => return Err(head.err("expected `ideal`, `chern`, `class` or `fundamental`")),
                }
            }
        }
    }

    let at_end = |msg: &str| {
        InstanceError::Syntax(Diagnostic { line: text.lines().count().max(1), column: 1, message: msg.into() })
    };
    let denominator: i64 = match options.get("denominator") {
        Some(s) => parse_int(s, "the denominator")?,
        None => 1,
    };
    if denominator <= 0 {
        return Err(options["denominator"].err("the denominator must be positive"));
    }
    let d_max = match (dmax, options.get("dmax")) {
        (Some(d), _) => d,
        (None, Some(s)) => parse_rational(s, "dmax")?,
        (None, None) => return Err(at_end("missing `dmax` in OPTIONS")),
    };

    let pulls: Vec<&RawMap> = maps.iter().filter(|m| m.pull).collect();
    let pushes: Vec<&RawMap> = maps.iter().filter(|m| !m.pull).collect();
    let (pull, push) = match (pulls.as_slice(), pushes.as_slice()) {
        ([a], [b]) => (*a, *b),
        ([], _) => return Err(at_end("missing `pull` MAP")),
        (_, []) => return Err(at_end("missing `push` MAP")),
        ([_, b, ..], _) | (_, [_, b, ..]) => {
            return Err(InstanceError::Syntax(Diagnostic { line: b.line, column: 1, message: "duplicate MAP kind".into() }))
        }
    };
    for m in [pull, push] {
        for end in [&m.source, &m.target] {
            if !rings.contains_key(&end.text) {
                return Err(end.err(format!("unknown ring `{}` in map `{}`", end.text, m.name)));
            }
        }
    }
    if push.source.text != pull.target.text || push.target.text != pull.source.text {
        return Err(push.source.err("the push map must go from the pull target back to the pull source"));
    }
    if pull.source.text == pull.target.text {
        return Err(pull.target.err("X and Y must be different rings"));
    }
    if let Some(s) = &pull.shift {
        return Err(s.err("a pull map has no shift"));
    }
    let center = center.ok_or_else(|| at_end("missing CENTER block"))?;
    let codim: usize = center.ideals.iter().map(|k| k.codim).sum();
    if let Some(s) = &push.shift {
        let v: usize = parse_int(s, "the shift")?;
        if v != codim {
            return Err(s.err(format!("shift {v} differs from the total codimension {codim}")));
        }
    }

    let ring_data = |r: &RawRing| -> Result<(RingData, Vec<String>), InstanceError> {
        let mut gens = Vec::new();
        for (n, d) in &r.gens {
            let deg = parse_rational(d, "a generator degree")?;
            if deg <= Rational::from(0) {
                return Err(d.err("generator degrees must be positive"));
            }
            if (deg * Rational::from(denominator)).denom() != &1 {
                return Err(d.err(format!("degree {deg} is not a multiple of 1/{denominator}")));
            }
            if !n.text.chars().next().is_some_and(char::is_alphabetic)
                || !n.text.chars().all(|c| c.is_alphanumeric() || c == '_')
            {
                return Err(n.err(format!("invalid generator name `{}`", n.text)));
            }
            gens.push((n.text.clone(), deg));
        }
        let names: Vec<&str> = gens.iter().map(|(n, _)| n.as_str()).collect();
        let degs: Vec<Degree> = gens.iter().map(|(_, d)| *d).collect();
        for rel in &r.rels {
            let p = check_expr(rel, &names)?;
            if matches!(p.homogeneity(&degs), Homogeneity::Mixed) {
                return Err(rel.err(format!("relation `{}` is not homogeneous", rel.text)));
            }
        }
        let rels = r.rels.iter().map(|s| s.text.clone()).collect();
        let owned = names.iter().map(|s| s.to_string()).collect();
        Ok((RingData { generators: gens, relations: rels }, owned))
    };
    let (x, xnames) = ring_data(&rings[&pull.source.text])?;
    let (y, ynames) = ring_data(&rings[&pull.target.text])?;
    let xn: Vec<&str> = xnames.iter().map(String::as_str).collect();
    let yn: Vec<&str> = ynames.iter().map(String::as_str).collect();

    let mut pull_images = vec![None; xn.len()];
    for (lhs, rhs) in &pull.entries {
        let i = xn
            .iter()
            .position(|n| *n == lhs.text)
            .ok_or_else(|| lhs.err(format!("`{}` is not a generator of {}", lhs.text, pull.source.text)))?;
        if pull_images[i].is_some() {
            return Err(lhs.err(format!("image of `{}` given twice", lhs.text)));
        }
        check_expr(rhs, &yn)?;
        pull_images[i] = Some(rhs.text.clone());
    }
    let pull_strings = pull_images
        .into_iter()
        .enumerate()
        .map(|(i, s)| {
            s.ok_or_else(|| {
                InstanceError::Syntax(Diagnostic {
                    line: pull.line,
                    column: 1,
                    message: format!("missing image of generator `{}`", xn[i]),
                })
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut push_entries = Vec::new();
    for (lhs, rhs) in &push.entries {
        check_expr(lhs, &yn)?;
        check_expr(rhs, &xn)?;
        push_entries.push((lhs.text.clone(), rhs.text.clone()));
    }

    let mut ideals = Vec::new();
    for k in &center.ideals {
        let at = Span { text: String::new(), line: k.line, column: 1 };
        let chern = k.chern.as_ref().ok_or_else(|| at.err(format!("ideal `{}` has no `chern` line", k.name)))?;
        for c in chern {
            check_expr(c, &yn)?;
        }
        let class = k.class.as_ref().ok_or_else(|| at.err(format!("ideal `{}` has no `class` line", k.name)))?;
        check_expr(class, &xn)?;
        ideals.push(IdealData {
            name: k.name.clone(),
            weight: k.weight,
            codim: k.codim,
            chern: chern.iter().map(|c| c.text.clone()).collect(),
            class: class.text.clone(),
        });
    }
    let fundamental = center.fundamental.as_ref().ok_or_else(|| {
        InstanceError::Syntax(Diagnostic { line: center.line, column: 1, message: "missing `fundamental` line".into() })
    })?;
    check_expr(fundamental, &xn)?;

    Ok(InstanceFile {
        data: InstanceData {
            x,
            y,
            pull: pull_strings,
            push: push_entries,
            ideals,
            y_class: fundamental.text.clone(),
            d_max,
            denominator,
        },
        push_line: push.line,
        pull_line: pull.line,
        center_line: center.line,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const LINE: &str = "\
OPTIONS
  dmax 4
  denominator 2
RING X
  gen H 1
  rel H^3
RING Y
  gen h 1
  rel h^2
MAP i pull X Y
  H -> h
MAP j push Y X shift 1
  1 -> H
  h -> H^2
CENTER
  ideal x weight 2 codim 1
  chern h
  class H
  fundamental H
";

    #[test]
    fn parses_a_line_in_the_plane() {
        let f = parse(LINE, None).unwrap();
        assert_eq!(f.data.d_max, Rational::from(4));
        assert_eq!(f.data.pull, vec!["h".to_string()]);
        assert_eq!(f.data.push.len(), 2);
        assert!(f.build().is_ok());
        let g = parse(LINE, Some(Rational::from(2))).unwrap();
        assert_eq!(g.data.d_max, Rational::from(2));
    }

    #[test]
    fn diagnostics_carry_positions() {
        let bad = LINE.replace("rel h^2", "rel h^2 + h");
        match parse(&bad, None) {
            Err(InstanceError::Syntax(d)) => {
                assert_eq!((d.line, d.column), (9, 7));
                assert!(d.message.contains("not homogeneous"));
            }
            other => panic!("{other:?}"),
        }
        let bad = LINE.replace("  H -> h", "  H -> h +* 2");
        match parse(&bad, None) {
            Err(InstanceError::Syntax(d)) => assert_eq!((d.line, d.column), (11, 11)),
            other => panic!("{other:?}"),
        }
        let bad = LINE.replace("  chern h", "  chern q");
        match parse(&bad, None) {
            Err(InstanceError::Syntax(d)) => assert_eq!((d.line, d.column), (17, 9)),
            other => panic!("{other:?}"),
        }
        let bad = LINE.replace("MAP j push Y X shift 1", "MAP j push Y Z shift 1");
        assert!(matches!(parse(&bad, None), Err(InstanceError::Syntax(d)) if d.line == 12 && d.column == 14));
        let bad = LINE.replace("CENTER", "CENTER\nCENTER");
        assert!(matches!(parse(&bad, None), Err(InstanceError::Syntax(d)) if d.line == 16));
    }

    #[test]
    fn validation_errors_name_the_datum() {
        let bad = LINE.replace("h -> H^2", "h -> 2*H^2");
        match parse(&bad, None).unwrap().build() {
            Err(InstanceError::Validation { line, source: BlowupError::ProjectionFormula { alpha, beta, .. } }) => {
                assert_eq!(line, Some(12));
                assert_eq!((alpha.as_str(), beta.as_str()), ("1", "H"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn shift_must_match_codimension() {
        let bad = LINE.replace("shift 1", "shift 2");
        assert!(matches!(parse(&bad, None), Err(InstanceError::Syntax(d)) if d.line == 12));
    }
}
