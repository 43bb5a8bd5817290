//! Plain-text formats for fans, ray functions and matroids.
//!
//! ```text
//! tropfan-fan v1
//! rank 2
//! ray 1 0
//! ray 0 1
//! ray -1 -1
//! cone 0 1
//! cone 1 2
//! cone 0 2
//! weights 1 1 1
//! function 0 0 1
//! ```
//!
//! `weights` (one per cone line) and `function` (one rational per ray) are optional.
//! Blank lines and `#` comments are ignored. [`write_fan`] emits the canonical form:
//! rays in index order, one line per maximal cone with ascending indices.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::linalg::Q;
use crate::matroid::{elements, Matroid};

pub const FAN_HEADER: &str = "tropfan-fan v1";
pub const MATROID_HEADER: &str = "tropfan-matroid v1";

#[derive(Clone, Debug)]
pub struct FanFile {
    pub fan: Fan,
    pub function: Option<Vec<Q>>,
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Non-empty lines with comments stripped, numbered from 1.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn ints<T: std::str::FromStr>(line: usize, words: &[&str]) -> Result<Vec<T>> {
    words.iter().map(|w| w.parse::<T>().map_err(|_| perr(line, format!("expected an integer, found `{w}`")))).collect()
}

fn rationals(line: usize, words: &[&str]) -> Result<Vec<Q>> {
    words.iter().map(|w| w.parse::<Q>().map_err(|_| perr(line, format!("expected a rational, found `{w}`")))).collect()
}

fn expect_header<'a>(it: &mut impl Iterator<Item = (usize, &'a str)>, header: &str) -> Result<()> {
    match it.next() {
        Some((_, l)) if l == header => Ok(()),
        Some((n, l)) => Err(perr(n, format!("expected `{header}`, found `{l}`"))),
        None => Err(perr(0, "empty input")),
    }
}

pub fn parse_fan(text: &str) -> Result<FanFile> {
    let mut it = lines(text);
    expect_header(&mut it, FAN_HEADER)?;
    let mut rank = None;
    let mut rays = Vec::new();
    let mut cones = Vec::new();
    let mut weights = None;
    let mut function = None;
    for (n, l) in it {
        let words: Vec<&str> = l.split_whitespace().collect();
        let (key, rest) = (words[0], &words[1..]);
        match key {
            "rank" => {
                if rank.is_some() {
                    return Err(perr(n, "rank given twice"));
                }
                let v: Vec<usize> = ints(n, rest)?;
                if v.len() != 1 {
                    return Err(perr(n, "rank takes one value"));
                }
                rank = Some(v[0]);
            }
            "ray" => rays.push(ints::<i64>(n, rest)?),
            "cone" => cones.push(ints::<usize>(n, rest)?),
            "weights" if weights.is_none() => weights = Some(ints::<i64>(n, rest)?),
            "function" if function.is_none() => function = Some(rationals(n, rest)?),
            "weights" | "function" => return Err(perr(n, format!("{key} given twice"))),
            _ => return Err(perr(n, format!("unknown key `{key}`"))),
        }
    }
    let rank = rank.ok_or_else(|| perr(0, "missing `rank` line"))?;
    if cones.is_empty() {
        return Err(perr(0, "no cones given"));
    }
    let fan = Fan::new(rank, rays, cones, weights)?;
    if let Some(f) = &function {
        if f.len() != fan.num_rays() {
            return Err(Error::FunctionLength { found: f.len(), rays: fan.num_rays() });
        }
    }
    Ok(FanFile { fan, function })
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn keyed<T: ToString>(key: &str, xs: &[T]) -> String {
    if xs.is_empty() {
        key.to_string()
    } else {
        format!("{key} {}", join(xs))
    }
}

pub fn write_fan(fan: &Fan, function: Option<&[Q]>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{FAN_HEADER}");
    let _ = writeln!(out, "rank {}", fan.rank());
    for r in fan.rays() {
        let _ = writeln!(out, "{}", keyed("ray", r));
    }
    for c in fan.maximal_cones() {
        let _ = writeln!(out, "{}", keyed("cone", c.rays()));
    }
    if let Some(w) = fan.explicit_weights() {
        let _ = writeln!(out, "{}", keyed("weights", w));
    }
    if let Some(f) = function {
        let _ = writeln!(out, "{}", keyed("function", f));
    }
    out
}

/// Ray values for `--function` files: either a `function …` line or bare numbers.
pub fn parse_function(text: &str) -> Result<Vec<Q>> {
    let mut out = Vec::new();
    for (n, l) in lines(text) {
        let words: Vec<&str> = l.split_whitespace().collect();
        let vals = if words[0] == "function" { &words[1..] } else { &words[..] };
        out.extend(rationals(n, vals)?);
    }
    Ok(out)
}

pub fn parse_matroid(text: &str) -> Result<Matroid> {
    let mut it = lines(text);
    expect_header(&mut it, MATROID_HEADER)?;
    let mut ground = None;
    let mut bases = Vec::new();
    for (n, l) in it {
        let words: Vec<&str> = l.split_whitespace().collect();
        match words[0] {
            "ground" => {
                let v: Vec<usize> = ints(n, &words[1..])?;
                if v.len() != 1 || ground.is_some() {
                    return Err(perr(n, "ground takes one value, given once"));
                }
                ground = Some(v[0]);
            }
            "basis" => bases.push(ints::<usize>(n, &words[1..])?),
            k => return Err(perr(n, format!("unknown key `{k}`"))),
        }
    }
    let ground = ground.ok_or_else(|| perr(0, "missing `ground` line"))?;
    Matroid::from_bases(ground, bases)
}

pub fn write_matroid(m: &Matroid) -> String {
    let mut out = format!("{MATROID_HEADER}\nground {}\n", m.ground_size());
    for &b in m.bases() {
        let _ = writeln!(out, "{}", keyed("basis", &elements(b)));
    }
    out
}
