//! Text formats for complexes, boundaries, matrices and plain graphs.
//!
//! Complex file:
//!
//! ```text
//! # comment
//! dim 2
//! scale 100          # optional fixed-point denominator, default 1
//! s 0 1 2 1.25       # top simplex, optional decimal weight (default 1)
//! s 1 2 3
//! f 7 8              # extra (d-1)-simplex
//! ```
//!
//! An `s` line with fewer than `d + 1` vertices is a lower-dimensional
//! simplex of a full complex: `(d-1)`-simplices become extra faces and
//! anything smaller is ignored.
//!
//! Boundary file: one `(d-1)`-simplex per line, as vertex ids.
//!
//! Matrix file: `mld <m> <n>`, optional `scale`, one `e <row> <col>` per
//! nonzero, `w <w0> ... <w_{n-1}>` (default all 1) and `u <rows...>`.
//!
//! Graph file: `graph <n>` followed by `e <u> <v>` lines.

use crate::chain::{Chain, Simplex, Weight, WeightVector};
use crate::complex::ComplexSlice;
use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;
use crate::td::Graph;

const MAX_FRACTION_DIGITS: u32 = 18;

/// Parses a decimal like `-1.25` into fixed point with the given denominator.
/// Fails if the value is not an exact multiple of `1 / scale`.
pub fn parse_scaled(token: &str, scale: Weight) -> Result<Weight> {
    let bad = || Error::input(format!("invalid weight {token:?}"));
    let (negative, body) = match token.as_bytes().first() {
        Some(b'-') => (true, &token[1..]),
        Some(b'+') => (false, &token[1..]),
        _ => (false, token),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return Err(bad());
    }
    if frac_part.len() as u32 > MAX_FRACTION_DIGITS {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mantissa: i128 = if digits.is_empty() {
        0
    } else {
        digits.parse().map_err(|_| bad())?
    };
    let denom = 10i128.pow(frac_part.len() as u32);
    let scaled = mantissa.checked_mul(i128::from(scale)).ok_or_else(bad)?;
    if scaled % denom != 0 {
        return Err(Error::input(format!(
            "weight {token} is not a multiple of 1/{scale}"
        )));
    }
    let value = scaled / denom;
    let value = if negative { -value } else { value };
    Weight::try_from(value).map_err(|_| bad())
}

/// Inverse of [`parse_scaled`]: the shortest exact decimal for `value / scale`.
pub fn format_scaled(value: Weight, scale: Weight) -> Result<String> {
    let (v, s) = (i128::from(value), i128::from(scale));
    for k in 0..=MAX_FRACTION_DIGITS {
        let num = v * 10i128.pow(k);
        if num % s != 0 {
            continue;
        }
        let q = num / s;
        if k == 0 {
            return Ok(q.to_string());
        }
        let sign = if q < 0 { "-" } else { "" };
        let digits = format!("{:0>width$}", q.unsigned_abs(), width = k as usize + 1);
        let (int, frac) = digits.split_at(digits.len() - k as usize);
        return Ok(format!("{sign}{int}.{frac}"));
    }
    Err(Error::input(format!(
        "{value}/{scale} has no finite decimal expansion"
    )))
}

fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("");
        let tok: Vec<&str> = line.split_whitespace().collect();
        (!tok.is_empty()).then_some((i + 1, tok))
    })
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize) -> Result<T> {
    tok.parse()
        .map_err(|_| Error::input(format!("line {line}: cannot parse {tok:?}")))
}

fn parse_simplex(tokens: &[&str], line: usize) -> Result<Simplex> {
    let vs = tokens
        .iter()
        .map(|t| parse_num::<u32>(t, line))
        .collect::<Result<Vec<_>>>()?;
    Simplex::new(vs).map_err(|e| Error::input(format!("line {line}: {e}")))
}

/// A parsed complex file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexFile {
    pub slice: ComplexSlice,
    pub scale: Weight,
}

pub fn parse_complex(text: &str) -> Result<ComplexFile> {
    let mut dim: Option<usize> = None;
    let mut scale: Weight = 1;
    let mut tops = Vec::new();
    let mut raw_tops: Vec<(usize, Vec<&str>)> = Vec::new();
    let mut extra = Vec::new();
    for (line, tok) in records(text) {
        match tok[0] {
            "dim" => {
                if dim.is_some() {
                    return Err(Error::input(format!("line {line}: second `dim` header")));
                }
                let d: usize = parse_num(tok.get(1).copied().unwrap_or(""), line)?;
                if d == 0 {
                    return Err(Error::input("dimension must be at least 1"));
                }
                dim = Some(d);
            }
            "scale" => {
                scale = parse_num(tok.get(1).copied().unwrap_or(""), line)?;
                if scale <= 0 {
                    return Err(Error::input(format!("line {line}: scale must be positive")));
                }
            }
            "s" | "f" => {
                if dim.is_none() {
                    return Err(Error::input(format!(
                        "line {line}: simplex before `dim` header"
                    )));
                }
                raw_tops.push((line, tok));
            }
            other => {
                return Err(Error::input(format!(
                    "line {line}: unknown record {other:?}"
                )))
            }
        }
    }
    let d = dim.ok_or_else(|| Error::input("missing `dim` header"))?;
    for (line, tok) in raw_tops {
        let body = &tok[1..];
        if tok[0] == "f" {
            if body.len() != d {
                return Err(Error::input(format!(
                    "line {line}: extra face needs {d} vertices"
                )));
            }
            extra.push(parse_simplex(body, line)?);
            continue;
        }
        match body.len() {
            n if n == d + 1 => tops.push((parse_simplex(body, line)?, scale)),
            n if n == d + 2 => {
                let w = parse_scaled(body[d + 1], scale)
                    .map_err(|e| Error::input(format!("line {line}: {e}")))?;
                tops.push((parse_simplex(&body[..=d], line)?, w));
            }
            n if n == d => extra.push(parse_simplex(body, line)?),
            0 => return Err(Error::input(format!("line {line}: empty simplex"))),
            n if n < d => {
                parse_simplex(body, line)?;
            }
            _ => {
                return Err(Error::input(format!(
                    "line {line}: too many fields for a {d}-simplex"
                )))
            }
        }
    }
    let slice = ComplexSlice::build(d, tops, extra)?;
    Ok(ComplexFile { slice, scale })
}

/// Writes a complex file. Faces that bound nothing are written as `f` lines.
pub fn write_complex(slice: &ComplexSlice, scale: Weight, comments: &[String]) -> Result<String> {
    let mut out = String::new();
    for c in comments {
        out.push_str(&format!("# {c}\n"));
    }
    out.push_str(&format!("dim {}\n", slice.dim()));
    if scale != 1 {
        out.push_str(&format!("scale {scale}\n"));
    }
    for (j, s) in slice.top().iter().enumerate() {
        out.push('s');
        for v in s.vertices() {
            out.push_str(&format!(" {v}"));
        }
        let w = slice.weights().get(j);
        if w != scale {
            out.push_str(&format!(" {}", format_scaled(w, scale)?));
        }
        out.push('\n');
    }
    for (i, f) in slice.faces().iter().enumerate() {
        if slice.coface_degree(i) == 0 {
            out.push('f');
            for v in f.vertices() {
                out.push_str(&format!(" {v}"));
            }
            out.push('\n');
        }
    }
    Ok(out)
}

pub fn parse_boundary(text: &str, slice: &ComplexSlice) -> Result<Chain> {
    let simplices = records(text)
        .map(|(line, tok)| {
            if tok.len() != slice.dim() {
                return Err(Error::input(format!(
                    "line {line}: boundary simplices need {} vertices",
                    slice.dim()
                )));
            }
            parse_simplex(&tok, line)
        })
        .collect::<Result<Vec<_>>>()?;
    slice.face_chain(&simplices)
}

pub fn write_boundary(slice: &ComplexSlice, u: &Chain, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        out.push_str(&format!("# {c}\n"));
    }
    for i in u.iter() {
        let vs: Vec<String> = slice.faces()[i]
            .vertices()
            .iter()
            .map(u32::to_string)
            .collect();
        out.push_str(&vs.join(" "));
        out.push('\n');
    }
    out
}

/// A parsed matrix file: the code matrix, the target and the weight scale.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixFile {
    pub matrix: Gf2Matrix,
    pub target: Chain,
    pub scale: Weight,
}

pub fn parse_matrix(text: &str) -> Result<MatrixFile> {
    let mut shape: Option<(usize, usize)> = None;
    let mut scale: Weight = 1;
    let mut entries = Vec::new();
    let mut weight_tokens: Option<(usize, Vec<String>)> = None;
    let mut target = Vec::new();
    for (line, tok) in records(text) {
        let field = |i: usize| tok.get(i).copied().unwrap_or("");
        match tok[0] {
            "mld" => {
                shape = Some((parse_num(field(1), line)?, parse_num(field(2), line)?));
            }
            "scale" => {
                scale = parse_num(field(1), line)?;
                if scale <= 0 {
                    return Err(Error::input(format!("line {line}: scale must be positive")));
                }
            }
            "e" => {
                if tok.len() != 3 {
                    return Err(Error::input(format!(
                        "line {line}: expected `e <row> <col>`"
                    )));
                }
                entries.push((parse_num(field(1), line)?, parse_num(field(2), line)?));
            }
            "w" => {
                if weight_tokens.is_some() {
                    return Err(Error::input(format!("line {line}: second weight line")));
                }
                weight_tokens = Some((line, tok[1..].iter().map(|s| s.to_string()).collect()));
            }
            "u" => {
                for t in &tok[1..] {
                    target.push(parse_num::<usize>(t, line)?);
                }
            }
            other => {
                return Err(Error::input(format!(
                    "line {line}: unknown record {other:?}"
                )))
            }
        }
    }
    let (m, n) = shape.ok_or_else(|| Error::input("missing `mld <m> <n>` header"))?;
    let weights = match weight_tokens {
        None => vec![scale; n],
        Some((line, toks)) => {
            if toks.len() != n {
                return Err(Error::input(format!(
                    "line {line}: {} weights for {n} columns",
                    toks.len()
                )));
            }
            toks.iter()
                .map(|t| parse_scaled(t, scale))
                .collect::<Result<Vec<_>>>()?
        }
    };
    let matrix = Gf2Matrix::from_entries(m, n, entries, WeightVector::new(weights))?;
    let target = matrix.row_chain(target)?;
    Ok(MatrixFile {
        matrix,
        target,
        scale,
    })
}

pub fn write_matrix(
    a: &Gf2Matrix,
    u: &Chain,
    scale: Weight,
    comments: &[String],
) -> Result<String> {
    let mut out = String::new();
    for c in comments {
        out.push_str(&format!("# {c}\n"));
    }
    out.push_str(&format!("mld {} {}\n", a.rows(), a.cols()));
    if scale != 1 {
        out.push_str(&format!("scale {scale}\n"));
    }
    for (r, c) in a.entries() {
        out.push_str(&format!("e {r} {c}\n"));
    }
    out.push('w');
    for &w in a.weights().as_slice() {
        out.push_str(&format!(" {}", format_scaled(w, scale)?));
    }
    out.push('\n');
    out.push('u');
    for r in u.iter() {
        out.push_str(&format!(" {r}"));
    }
    out.push('\n');
    Ok(out)
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut n = None;
    let mut edges = Vec::new();
    for (line, tok) in records(text) {
        match (tok[0], tok.len()) {
            ("graph", 2) => n = Some(parse_num(tok[1], line)?),
            ("e", 3) => edges.push((parse_num(tok[1], line)?, parse_num(tok[2], line)?)),
            _ => return Err(Error::input(format!("line {line}: unexpected record"))),
        }
    }
    Graph::from_edges(
        n.ok_or_else(|| Error::input("missing `graph <n>` header"))?,
        edges,
    )
}
