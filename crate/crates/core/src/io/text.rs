//! Line-oriented model and property files.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Signed;

use super::ParseError;
use crate::model::{Configuration, Transition, Vass};
use crate::properties::{GupProperty, Interval};

/// A model file: the system plus the optional initial configuration and
/// internal transition set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelFile {
    pub vass: Vass,
    pub init: Option<Configuration>,
    pub internal: Option<BTreeSet<usize>>,
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(code, _)| code)
}

fn parse_int(tok: &str, line: usize) -> Result<BigInt, ParseError> {
    tok.parse()
        .map_err(|_| ParseError::at(line, format!("expected an integer, found `{tok}`")))
}

fn parse_index(tok: &str, line: usize) -> Result<usize, ParseError> {
    tok.parse().map_err(|_| {
        ParseError::at(
            line,
            format!("expected a nonnegative index, found `{tok}`"),
        )
    })
}

struct PendingTransition<'a> {
    line: usize,
    from: &'a str,
    to: &'a str,
    update: Vec<BigInt>,
}

/// Parses a model file. Directives may appear in any order; transitions are
/// indexed in the order of their `trans` lines.
pub fn parse_model(text: &str) -> Result<ModelFile, ParseError> {
    let mut dim: Option<(usize, usize)> = None;
    let mut states: Vec<(usize, &str)> = Vec::new();
    let mut init: Option<(usize, &str, Vec<BigInt>)> = None;
    let mut trans: Vec<PendingTransition<'_>> = Vec::new();
    let mut internal: Option<(usize, Vec<usize>)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut toks = strip_comment(raw).split_whitespace();
        let Some(kw) = toks.next() else { continue };
        let rest: Vec<&str> = toks.collect();
        match kw {
            "dim" => {
                if dim.is_some() {
                    return Err(ParseError::at(line, "duplicate `dim` line"));
                }
                let [n] = rest.as_slice() else {
                    return Err(ParseError::at(line, "`dim` takes exactly one value"));
                };
                let n = parse_index(n, line)?;
                if n == 0 {
                    return Err(ParseError::at(line, "dimension must be positive"));
                }
                dim = Some((line, n));
            }
            "state" => {
                if rest.is_empty() {
                    return Err(ParseError::at(line, "`state` needs at least one name"));
                }
                states.extend(rest.iter().map(|s| (line, *s)));
            }
            "init" => {
                if init.is_some() {
                    return Err(ParseError::at(line, "duplicate `init` line"));
                }
                let Some((q, vals)) = rest.split_first() else {
                    return Err(ParseError::at(line, "`init` needs a state"));
                };
                let vals = vals
                    .iter()
                    .map(|t| parse_int(t, line))
                    .collect::<Result<Vec<_>, _>>()?;
                if let Some(pos) = vals.iter().position(|v| v.is_negative()) {
                    return Err(ParseError::at(
                        line,
                        format!("initial value of component {} is negative", pos + 1),
                    ));
                }
                init = Some((line, q, vals));
            }
            "trans" => {
                if rest.len() < 2 {
                    return Err(ParseError::at(line, "`trans` needs a source and a target"));
                }
                let update = rest[2..]
                    .iter()
                    .map(|t| parse_int(t, line))
                    .collect::<Result<Vec<_>, _>>()?;
                trans.push(PendingTransition {
                    line,
                    from: rest[0],
                    to: rest[1],
                    update,
                });
            }
            "internal" => {
                if internal.is_some() {
                    return Err(ParseError::at(line, "duplicate `internal` line"));
                }
                let ids = rest
                    .iter()
                    .map(|t| parse_index(t, line))
                    .collect::<Result<Vec<_>, _>>()?;
                internal = Some((line, ids));
            }
            other => {
                return Err(ParseError::at(line, format!("unknown directive `{other}`")));
            }
        }
    }

    let Some((_, n)) = dim else {
        return Err(ParseError::global("missing `dim` line"));
    };
    if states.is_empty() {
        return Err(ParseError::global("missing `state` line"));
    }
    let mut ids: HashMap<&str, usize> = HashMap::new();
    for &(line, name) in &states {
        if ids.insert(name, ids.len()).is_some() {
            return Err(ParseError::at(line, format!("duplicate state `{name}`")));
        }
    }
    let lookup = |name: &str, line: usize| {
        ids.get(name)
            .copied()
            .ok_or_else(|| ParseError::at(line, format!("unknown state `{name}`")))
    };
    let arity = |len: usize, line: usize| {
        if len == n {
            Ok(())
        } else {
            Err(ParseError::at(
                line,
                format!("expected {n} values, found {len}"),
            ))
        }
    };
    let mut transitions = Vec::with_capacity(trans.len());
    for t in trans {
        arity(t.update.len(), t.line)?;
        transitions.push(Transition::new(
            lookup(t.from, t.line)?,
            lookup(t.to, t.line)?,
            t.update,
        ));
    }
    let names = states.iter().map(|(_, s)| s.to_string()).collect();
    let vass = Vass::new(names, n, transitions).map_err(|e| ParseError::global(e.to_string()))?;

    let init = match init {
        None => None,
        Some((line, q, vals)) => {
            arity(vals.len(), line)?;
            let q = lookup(q, line)?;
            Some(Configuration::new(q, vals).map_err(|e| ParseError::at(line, e.to_string()))?)
        }
    };
    let internal = match internal {
        None => None,
        Some((line, list)) => {
            let count = vass.transitions().len();
            if let Some(bad) = list.iter().find(|&&k| k >= count) {
                return Err(ParseError::at(
                    line,
                    format!("transition index {bad} out of range (there are {count})"),
                ));
            }
            Some(list.into_iter().collect())
        }
    };
    Ok(ModelFile {
        vass,
        init,
        internal,
    })
}

fn join<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Writes a model in the format read by [`parse_model`].
pub fn format_model(m: &ModelFile) -> String {
    let v = &m.vass;
    let mut out = String::new();
    let _ = writeln!(out, "dim {}", v.dim());
    let _ = writeln!(out, "state {}", join(v.states()));
    if let Some(c) = &m.init {
        let _ = writeln!(out, "init {} {}", v.state_name(c.state()), join(c.values()));
    }
    for t in v.transitions() {
        let _ = writeln!(
            out,
            "trans {} {} {}",
            v.state_name(t.from),
            v.state_name(t.to),
            join(&t.update)
        );
    }
    if let Some(set) = &m.internal {
        let line = format!("internal {}", join(set));
        let _ = writeln!(out, "{}", line.trim_end());
    }
    out
}

/// Parses `"q v1 … vn"` against `vass`.
pub fn parse_configuration(vass: &Vass, text: &str) -> Result<Configuration, ParseError> {
    let toks: Vec<&str> = text.split_whitespace().collect();
    let Some((q, vals)) = toks.split_first() else {
        return Err(ParseError::global("empty configuration"));
    };
    let q = vass
        .state_id(q)
        .ok_or_else(|| ParseError::global(format!("unknown state `{q}`")))?;
    let vals = vals
        .iter()
        .map(|t| t.parse::<BigInt>().map_err(|_| ParseError::global(format!("expected an integer, found `{t}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    if vals.len() != vass.dim() {
        return Err(ParseError::global(format!(
            "expected {} values, found {}",
            vass.dim(),
            vals.len()
        )));
    }
    Configuration::new(q, vals).map_err(|e| ParseError::global(e.to_string()))
}

/// Splits a row into interval tokens; whitespace inside brackets is ignored.
fn interval_tokens(s: &str, line: usize) -> Result<Vec<String>, ParseError> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut open = false;
    for c in s.chars() {
        match c {
            '(' | '[' if !open => {
                open = true;
                cur.push(c);
            }
            ')' | ']' if open => {
                open = false;
                cur.push(c);
                out.push(std::mem::take(&mut cur));
            }
            c if c.is_whitespace() => {}
            c if open => cur.push(c),
            c => {
                return Err(ParseError::at(
                    line,
                    format!("unexpected `{c}` outside an interval"),
                ))
            }
        }
    }
    if open {
        return Err(ParseError::at(line, format!("unterminated interval `{cur}`")));
    }
    Ok(out)
}

fn parse_interval(tok: &str, line: usize) -> Result<Interval, ParseError> {
    let bad = || ParseError::at(line, format!("malformed interval `{tok}`"));
    let (lo, hi) = tok[1..tok.len() - 1].split_once(',').ok_or_else(bad)?;
    let lower = match (tok.as_bytes()[0], lo) {
        (b'(', "-inf") => None,
        (b'[', a) if a != "-inf" => Some(parse_int(a, line)?),
        _ => return Err(bad()),
    };
    let upper = match (tok.as_bytes()[tok.len() - 1], hi) {
        (b')', "inf" | "+inf") => None,
        (b']', b) if b != "inf" && b != "+inf" => Some(parse_int(b, line)?),
        _ => return Err(bad()),
    };
    Interval::new(lower, upper).map_err(|e| ParseError::at(line, e.to_string()))
}

/// Parses `gup <n>` followed by `row` lines.
pub fn parse_gup(text: &str) -> Result<GupProperty, ParseError> {
    let mut dim: Option<usize> = None;
    let mut rows = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let code = strip_comment(raw).trim();
        let Some((kw, rest)) = code
            .split_once(char::is_whitespace)
            .or(if code.is_empty() { None } else { Some((code, "")) })
        else {
            continue;
        };
        match kw {
            "gup" => {
                if dim.is_some() {
                    return Err(ParseError::at(line, "duplicate `gup` line"));
                }
                let n = parse_index(rest.trim(), line)?;
                if n == 0 {
                    return Err(ParseError::at(line, "dimension must be positive"));
                }
                dim = Some(n);
            }
            "row" => {
                let Some(n) = dim else {
                    return Err(ParseError::at(line, "`row` before `gup`"));
                };
                let row = interval_tokens(rest, line)?
                    .iter()
                    .map(|t| parse_interval(t, line))
                    .collect::<Result<Vec<_>, _>>()?;
                if row.len() != n {
                    return Err(ParseError::at(
                        line,
                        format!("expected {n} intervals, found {}", row.len()),
                    ));
                }
                rows.push(row);
            }
            other => {
                return Err(ParseError::at(line, format!("unknown directive `{other}`")));
            }
        }
    }
    let Some(n) = dim else {
        return Err(ParseError::global("missing `gup` line"));
    };
    GupProperty::new(n, rows).map_err(|e| ParseError::global(e.to_string()))
}

/// Writes a property in the format read by [`parse_gup`].
pub fn format_gup(p: &GupProperty) -> String {
    let mut out = format!("gup {}\n", p.dim());
    for row in p.rows() {
        let _ = writeln!(out, "row {}", join(row));
    }
    out
}
