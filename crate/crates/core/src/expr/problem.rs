use std::collections::HashSet;

use super::{parse_poly, ExprError};
use crate::ring::{is_identifier, Poly};
use crate::witness::Setting;

/// A membership problem as authored by a human: the generator set, the
/// claim, and optionally the distinguished generators `a` and `b` used by
/// the product commands.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemFile {
    pub setting: Setting,
    pub symbols: Vec<String>,
    pub generators: Vec<Poly>,
    /// Schematic families `left·A·right`.
    pub families: Vec<(Poly, Poly)>,
    pub claim: Option<Poly>,
    pub a: Option<Poly>,
    pub b: Option<Poly>,
}

const KEYS: [&str; 7] = ["setting", "symbols", "generators", "families", "claim", "a", "b"];

fn err(line: usize, column: usize, message: impl Into<String>) -> ExprError {
    ExprError::Syntax { line, column, message: message.into() }
}

/// Splits on `sep` outside parentheses and brackets; yields each piece with
/// its byte offset.
fn split_top(s: &str, sep: char) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push((start, &s[start..i]));
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push((start, &s[start..]));
    out
}

/// Column (1-based, in chars) of byte offset `off` within `line`.
fn col_of(line: &str, off: usize) -> usize {
    line[..off].chars().count() + 1
}

fn parse_expr_at(
    src: &str,
    symbols: &[String],
    line_no: usize,
    column: usize,
) -> Result<Poly, ExprError> {
    parse_poly(src, symbols).map_err(|e| match e {
        ExprError::Syntax { column: c, message, .. } => ExprError::Syntax {
            line: line_no,
            column: column + c - 1,
            message,
        },
        ExprError::Undeclared { name, column: c, .. } => ExprError::Undeclared {
            name,
            line: line_no,
            column: column + c - 1,
        },
    })
}

/// Parses a problem file: `key: value` lines, list values separated by `;`,
/// `#` starts a comment line. Families are written `(left, right)`.
pub fn parse_problem(src: &str) -> Result<ProblemFile, ExprError> {
    // key -> (line number, full line, byte offset of value)
    let mut entries: Vec<(String, usize, &str, usize)> = Vec::new();
    let mut seen = HashSet::new();
    for (idx, line) in src.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = line.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some(colon) = line.find(':') else {
            return Err(err(line_no, 1, "expected `key: value`"));
        };
        let key = line[..colon].trim();
        if !KEYS.contains(&key) {
            return Err(err(line_no, col_of(line, line.find(key).unwrap_or(0)), format!("unknown key `{key}`")));
        }
        if !seen.insert(key.to_string()) {
            return Err(err(line_no, 1, format!("duplicate key `{key}`")));
        }
        entries.push((key.to_string(), line_no, line, colon + 1));
    }
    let find = |k: &str| entries.iter().find(|e| e.0 == k);

    let (_, line_no, line, off) = find("setting").ok_or_else(|| err(1, 1, "missing key `setting`"))?;
    let setting = match line[*off..].trim() {
        "nil" => Setting::Nil,
        "sqrt" => Setting::Sqrt,
        other => {
            return Err(err(*line_no, col_of(line, *off), format!("setting must be `nil` or `sqrt`, found `{other}`")))
        }
    };

    let (_, line_no, line, off) = find("symbols").ok_or_else(|| err(1, 1, "missing key `symbols`"))?;
    let mut symbols: Vec<String> = Vec::new();
    for (o, item) in split_top(&line[*off..], ';') {
        for (o2, name) in split_top(item, ',') {
            let name_t = name.trim();
            if name_t.is_empty() {
                continue;
            }
            let column = col_of(line, off + o + o2 + (name.len() - name.trim_start().len()));
            if !is_identifier(name_t) {
                return Err(err(*line_no, column, format!("invalid symbol name `{name_t}`")));
            }
            if symbols.iter().any(|s| s == name_t) {
                return Err(err(*line_no, column, format!("symbol `{name_t}` declared twice")));
            }
            symbols.push(name_t.to_string());
        }
    }

    let list = |key: &str| -> Result<Vec<(Poly, usize, usize)>, ExprError> {
        let Some((_, line_no, line, off)) = find(key) else { return Ok(Vec::new()) };
        let mut out = Vec::new();
        let value = &line[*off..];
        if value.trim().is_empty() {
            return Ok(out);
        }
        for (o, item) in split_top(value, ';') {
            let column = col_of(line, off + o);
            if item.trim().is_empty() {
                return Err(err(*line_no, column, "empty list item"));
            }
            out.push((parse_expr_at(item, &symbols, *line_no, column)?, *line_no, column));
        }
        Ok(out)
    };

    let mut generators = Vec::new();
    for (p, line_no, column) in list("generators")? {
        if p.has_schematic() {
            return Err(err(line_no, column, "generators may not contain schematic symbols"));
        }
        generators.push(p);
    }

    let mut families = Vec::new();
    if let Some((_, line_no, line, off)) = find("families") {
        let value = &line[*off..];
        if !value.trim().is_empty() {
            if setting != Setting::Sqrt {
                return Err(err(*line_no, col_of(line, *off), "families are only allowed with `setting: sqrt`"));
            }
            for (o, item) in split_top(value, ';') {
                let lead = item.len() - item.trim_start().len();
                let column = col_of(line, off + o + lead);
                let t = item.trim();
                let inner = t
                    .strip_prefix('(')
                    .and_then(|s| s.strip_suffix(')'))
                    .ok_or_else(|| err(*line_no, column, "expected a family `(left, right)`"))?;
                let parts = split_top(inner, ',');
                if parts.len() != 2 {
                    return Err(err(*line_no, column, "a family has exactly two sides"));
                }
                let left = parse_expr_at(parts[0].1, &symbols, *line_no, column + 1 + parts[0].0)?;
                let right = parse_expr_at(parts[1].1, &symbols, *line_no, column + 1 + parts[1].0)?;
                if left.has_schematic() || right.has_schematic() {
                    return Err(err(*line_no, column, "families may not contain schematic symbols"));
                }
                families.push((left, right));
            }
        }
    }

    let single = |key: &str| -> Result<Option<Poly>, ExprError> {
        let Some((_, line_no, line, off)) = find(key) else { return Ok(None) };
        parse_expr_at(&line[*off..], &symbols, *line_no, col_of(line, *off)).map(Some)
    };
    let claim = single("claim")?;
    let a = single("a")?;
    let b = single("b")?;
    for (key, p) in [("a", &a), ("b", &b)] {
        if p.as_ref().is_some_and(Poly::has_schematic) {
            let (_, line_no, _, _) = find(key).unwrap();
            return Err(err(*line_no, 1, format!("`{key}` may not contain schematic symbols")));
        }
    }

    Ok(ProblemFile { setting, symbols, generators, families, claim, a, b })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Symbol;

    #[test]
    fn cubic_demo_problem() {
        let src = "setting: nil\nsymbols: x; y\ngenerators: x^3-x\nclaim: [x,y]\n";
        let pf = parse_problem(src).unwrap();
        let x = Poly::var(Symbol::base("x").unwrap());
        let y = Poly::var(Symbol::base("y").unwrap());
        assert_eq!(pf.setting, Setting::Nil);
        assert_eq!(pf.symbols, vec!["x", "y"]);
        assert_eq!(pf.generators, vec![&x.pow(3) - &x]);
        assert_eq!(pf.claim, Some(x.commutator(&y)));
        assert!(pf.families.is_empty());
    }

    #[test]
    fn families_need_sqrt() {
        let src = "setting: nil\nsymbols: a, b\nfamilies: (a, b)\n";
        assert!(matches!(parse_problem(src), Err(ExprError::Syntax { line: 3, .. })));
        let src = "setting: sqrt\nsymbols: a, b\nfamilies: (a, b); ([a,b], a^2)\n";
        let pf = parse_problem(src).unwrap();
        assert_eq!(pf.families.len(), 2);
    }

    #[test]
    fn empty_generators_with_zero_claim() {
        let pf = parse_problem("setting: nil\nsymbols: x\ngenerators:\nclaim: 0\n").unwrap();
        assert!(pf.generators.is_empty());
        assert!(pf.claim.unwrap().is_zero());
    }

    #[test]
    fn comments_and_distinguished_generators() {
        let src = "# product problem\nsetting: sqrt\nsymbols: x;y\ngenerators: y^2\na: x\nb: y\n";
        let pf = parse_problem(src).unwrap();
        assert!(pf.a.is_some() && pf.b.is_some() && pf.claim.is_none());
    }

    #[test]
    fn validation_errors() {
        for src in [
            "symbols: x\n",
            "setting: nil\n",
            "setting: both\nsymbols: x\n",
            "setting: nil\nsymbols: x; x\n",
            "setting: nil\nsymbols: 1x\n",
            "setting: nil\nsymbols: x\nclaim: y\n",
            "setting: nil\nsymbols: x\nbogus: 1\n",
            "setting: nil\nsymbols: x\nclaim: x\nclaim: x\n",
            "setting: nil\nsymbols: x\ngenerators: x;;x\n",
            "setting: nil\nsymbols: x\ngenerators: x*t#1\n",
            "setting: sqrt\nsymbols: x\nfamilies: x, x\n",
            "no colon here\n",
        ] {
            assert!(parse_problem(src).is_err(), "accepted {src:?}");
        }
    }

    #[test]
    fn expression_errors_are_located_in_the_file() {
        let src = "setting: nil\nsymbols: x\ngenerators: x; x + z\n";
        match parse_problem(src) {
            Err(ExprError::Undeclared { name, line, column }) => {
                assert_eq!((name.as_str(), line, column), ("z", 3, 20));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
