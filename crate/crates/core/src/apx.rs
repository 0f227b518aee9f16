//! Reading and writing frameworks in apx fact syntax, and rendering solver
//! results as JSON.
//!
//! ```text
//! # comment
//! arg(a).
//! arg(b).
//! att(a,b).
//! ```
//!
//! One fact per line. Names match `[A-Za-z0-9_]+`. Arguments receive ids in
//! declaration order.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::framework::{ArgumentId, Attack, Framework, Labeling};

#[derive(Debug, PartialEq, Eq)]
enum Token<'a> {
    Ident(&'a str),
    Open,
    Close,
    Comma,
    Dot,
}

fn lex(line: &str) -> std::result::Result<Vec<Token<'_>>, String> {
    let mut out = Vec::new();
    let bytes = line.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b'(' => out.push(Token::Open),
            b')' => out.push(Token::Close),
            b',' => out.push(Token::Comma),
            b'.' => out.push(Token::Dot),
            c if c.is_ascii_whitespace() => {}
            c if c.is_ascii_alphanumeric() || c == b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push(Token::Ident(&line[start..i]));
                continue;
            }
            _ => {
                let ch = line[i..].chars().next().unwrap_or('?');
                return Err(format!("unexpected character '{ch}'"));
            }
        }
        i += 1;
    }
    Ok(out)
}

enum Fact<'a> {
    Arg(&'a str),
    Att(&'a str, &'a str),
}

fn parse_fact(line: &str) -> std::result::Result<Fact<'_>, String> {
    use Token::*;
    match lex(line)?.as_slice() {
        [Ident("arg"), Open, Ident(a), Close, Dot] => Ok(Fact::Arg(a)),
        [Ident("att"), Open, Ident(a), Comma, Ident(b), Close, Dot] => Ok(Fact::Att(a, b)),
        _ => Err(format!("malformed fact: {}", line.trim())),
    }
}

pub fn parse_apx(text: &str) -> Result<Framework> {
    let mut names: Vec<(ArgumentId, String)> = Vec::new();
    let mut index: HashMap<&str, ArgumentId> = HashMap::new();
    let mut attacks: Vec<(usize, &str, &str)> = Vec::new();
    let mut seen_attacks = BTreeSet::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fact = parse_fact(line).map_err(|message| Error::Parse {
            line: line_no,
            message,
        })?;
        match fact {
            Fact::Arg(name) => {
                if index.contains_key(name) {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("duplicate argument {name}"),
                    });
                }
                let id = ArgumentId(names.len() as u32);
                index.insert(name, id);
                names.push((id, name.to_owned()));
            }
            Fact::Att(a, b) => {
                if !seen_attacks.insert((a, b)) {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("duplicate attack ({a},{b})"),
                    });
                }
                attacks.push((line_no, a, b));
            }
        }
    }

    let mut resolved = Vec::with_capacity(attacks.len());
    for (line, a, b) in attacks {
        let lookup = |name: &str| {
            index.get(name).copied().ok_or_else(|| Error::Parse {
                line,
                message: format!("undeclared argument {name}"),
            })
        };
        resolved.push(Attack::new(lookup(a)?, lookup(b)?));
    }
    if names.is_empty() {
        return Err(Error::Parse {
            line: 0,
            message: "no arguments declared".into(),
        });
    }
    Framework::with_names(names, resolved)
}

/// Arguments in id order, then attacks in (source, target) id order.
pub fn serialize_apx(f: &Framework) -> String {
    let mut out = String::new();
    let name = |a: ArgumentId| f.name(a).expect("argument without a name");
    for &a in f.arguments() {
        let _ = writeln!(out, "arg({}).", name(a));
    }
    for at in f.attacks() {
        let _ = writeln!(out, "att({},{}).", name(at.source), name(at.target));
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveMeta {
    pub framework: String,
    pub method: String,
    pub elapsed_ms: u64,
    pub censored: bool,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RenderedLabeling {
    #[serde(rename = "in")]
    pub in_: Vec<String>,
    pub out: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveReport {
    pub framework: String,
    pub method: String,
    pub elapsed_ms: u64,
    pub censored: bool,
    pub seed: Option<u64>,
    pub stable_labelings: Vec<RenderedLabeling>,
}

pub fn names_of<'a>(f: &Framework, ids: impl IntoIterator<Item = &'a ArgumentId>) -> Vec<String> {
    let mut v: Vec<String> = ids
        .into_iter()
        .map(|&a| f.name(a).map_or_else(|| a.to_string(), str::to_owned))
        .collect();
    v.sort();
    v
}

pub fn solve_report(f: &Framework, labelings: &[Labeling], meta: &SolveMeta) -> SolveReport {
    let mut stable: Vec<RenderedLabeling> = labelings
        .iter()
        .map(|l| RenderedLabeling {
            in_: names_of(f, &l.in_),
            out: names_of(f, &l.out),
        })
        .collect();
    stable.sort();
    stable.dedup();
    SolveReport {
        framework: meta.framework.clone(),
        method: meta.method.clone(),
        elapsed_ms: meta.elapsed_ms,
        censored: meta.censored,
        seed: meta.seed,
        stable_labelings: stable,
    }
}

/// Canonical single-line JSON object for a solve. Name arrays are sorted and
/// labelings are ordered lexicographically, so equal inputs render to equal
/// bytes.
pub fn render_result(f: &Framework, labelings: &[Labeling], meta: &SolveMeta) -> String {
    serde_json::to_string(&solve_report(f, labelings, meta)).expect("report serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framework::tests::{f_ex, ids};

    #[test]
    fn parses_simple_document() {
        let f = parse_apx("arg(a).\narg(b).\natt(a,b).").unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f.attacks(), &[Attack::new(0, 1)]);
        assert_eq!(f.name(ArgumentId(1)), Some("b"));
    }

    #[test]
    fn whitespace_and_comments() {
        let f = parse_apx("# header\n\n  arg( x ) .\narg(y).\n  att ( x , y ).\n# done\n").unwrap();
        assert_eq!(f.attacks(), &[Attack::new(0, 1)]);
    }

    #[test]
    fn undeclared_argument() {
        let err = parse_apx("att(a,b).").unwrap_err();
        assert!(err.to_string().contains("undeclared argument a"), "{err}");
    }

    #[test]
    fn errors_carry_line_numbers() {
        match parse_apx("arg(a).\narg(a).") {
            Err(Error::Parse { line: 2, message }) => assert!(message.contains("duplicate argument")),
            other => panic!("unexpected {other:?}"),
        }
        match parse_apx("arg(a).\natt(a,a).\natt(a,a).") {
            Err(Error::Parse { line: 3, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match parse_apx("arg(a).\narg(b c).") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_apx("arg(a-b).").is_err());
        assert!(parse_apx("arg(a)").is_err());
        assert!(parse_apx("# nothing\n").is_err());
    }

    #[test]
    fn serialize_single_argument() {
        let f = Framework::from_pairs(1, &[]).unwrap();
        assert_eq!(serialize_apx(&f), "arg(a0).\n");
    }

    #[test]
    fn example_round_trip() {
        let f = f_ex();
        let text = serialize_apx(&f);
        let g = parse_apx(&text).unwrap();
        assert_eq!(g, f);
        assert_eq!(serialize_apx(&g), text);
    }

    #[test]
    fn render_example_result() {
        let f = f_ex();
        let l = Labeling {
            in_: ids(&[1, 4]),
            out: ids(&[0, 2, 3]),
            undec: ids(&[]),
        };
        let meta = SolveMeta {
            framework: "fex".into(),
            method: "direct".into(),
            ..Default::default()
        };
        let s = render_result(&f, &[l], &meta);
        assert_eq!(
            s,
            r#"{"framework":"fex","method":"direct","elapsed_ms":0,"censored":false,"seed":null,"stable_labelings":[{"in":["a1","a4"],"out":["a0","a2","a3"]}]}"#
        );
        assert!(render_result(&f, &[], &meta).contains(r#""stable_labelings":[]"#));
    }

    #[test]
    fn labelings_render_in_canonical_order() {
        let f = Framework::from_pairs(2, &[(0, 1), (1, 0)]).unwrap();
        let a = Labeling { in_: ids(&[0]), out: ids(&[1]), undec: ids(&[]) };
        let b = Labeling { in_: ids(&[1]), out: ids(&[0]), undec: ids(&[]) };
        let meta = SolveMeta::default();
        assert_eq!(
            render_result(&f, &[b.clone(), a.clone()], &meta),
            render_result(&f, &[a, b], &meta)
        );
    }
}
