//! Named group constructors and the descriptor grammar.
//!
//! ```text
//! A4  S5  D7  V(2,5)  V(2,5):M=[[0,-1],[1,-1]]  Heis(5)  SL2(9)
//! gens:[(1,2,3),(2,3,4)]
//! ```
//! `Alt(n)`, `Sym(n)` and `Dihedral(m)` are accepted as long forms.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::classes::split_top_level;
use super::{perm, vector_group, FiniteGroup, Kind, DEFAULT_ORDER_BOUND};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum GroupDescriptor {
    Alt(usize),
    Sym(usize),
    /// Order `2m`, acting on `m` points.
    Dihedral(usize),
    Vector { rank: usize, modulus: u32 },
    /// `(Z/m)^t x| Z/ord(M)`.
    VectorAction { modulus: u32, matrix: Vec<Vec<i64>> },
    Heisenberg(u32),
    Sl2(u32),
    /// Permutation generators in 1-based cycle notation.
    Gens(Vec<String>),
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDescriptor::Alt(n) => write!(f, "A{n}"),
            GroupDescriptor::Sym(n) => write!(f, "S{n}"),
            GroupDescriptor::Dihedral(m) => write!(f, "D{m}"),
            GroupDescriptor::Vector { rank, modulus } => write!(f, "V({rank},{modulus})"),
            GroupDescriptor::VectorAction { modulus, matrix } => {
                let rows: Vec<String> = matrix
                    .iter()
                    .map(|r| {
                        format!("[{}]", r.iter().map(i64::to_string).collect::<Vec<_>>().join(","))
                    })
                    .collect();
                write!(f, "V({},{modulus}):M=[{}]", matrix.len(), rows.join(","))
            }
            GroupDescriptor::Heisenberg(m) => write!(f, "Heis({m})"),
            GroupDescriptor::Sl2(m) => write!(f, "SL2({m})"),
            GroupDescriptor::Gens(g) => write!(f, "gens:[{}]", g.join(",")),
        }
    }
}

fn parse_num<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad {what} {s:?}")))
}

fn parenthesized<'a>(s: &'a str, head: &str) -> Option<&'a str> {
    s.strip_prefix(head)?.strip_prefix('(')?.strip_suffix(')')
}

/// Parses `[[a,b],[c,d]]`.
pub fn parse_matrix(s: &str) -> Result<Vec<Vec<i64>>> {
    let body = s
        .trim()
        .strip_prefix('[')
        .and_then(|b| b.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("matrix must be bracketed: {s:?}")))?;
    let rows = split_top_level(body)
        .into_iter()
        .map(|row| {
            let inner = row
                .trim()
                .strip_prefix('[')
                .and_then(|b| b.strip_suffix(']'))
                .ok_or_else(|| Error::Parse(format!("matrix row must be bracketed: {row:?}")))?;
            inner.split(',').map(|v| parse_num::<i64>(v, "matrix entry")).collect()
        })
        .collect::<Result<Vec<Vec<i64>>>>()?;
    let t = rows.len();
    if t == 0 || rows.iter().any(|r| r.len() != t) {
        return Err(Error::Parse(format!("matrix must be square: {s:?}")));
    }
    Ok(rows)
}

impl std::str::FromStr for GroupDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(rest) = s.strip_prefix("gens:") {
            let body = rest
                .strip_prefix('[')
                .and_then(|b| b.strip_suffix(']'))
                .ok_or_else(|| Error::Parse(format!("generator list must be bracketed: {s:?}")))?;
            let gens: Vec<String> =
                split_top_level(body).into_iter().map(str::to_string).collect();
            if gens.is_empty() {
                return Err(Error::Parse("empty generator list".into()));
            }
            return Ok(GroupDescriptor::Gens(gens));
        }
        if let Some((head, m)) = s.split_once(":M=") {
            let args = parenthesized(head, "V")
                .ok_or_else(|| Error::Parse(format!("unknown group descriptor {s:?}")))?;
            let (t, modulus) = args
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("expected V(t,m) in {s:?}")))?;
            let t: usize = parse_num(t, "rank")?;
            let modulus: u32 = parse_num(modulus, "modulus")?;
            let matrix = parse_matrix(m)?;
            if matrix.len() != t {
                return Err(Error::Parse(format!("matrix size does not match rank {t}")));
            }
            check_modulus(modulus)?;
            return Ok(GroupDescriptor::VectorAction { modulus, matrix });
        }
        if let Some(args) = parenthesized(&s, "V") {
            let (t, modulus) = args
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("expected V(t,m) in {s:?}")))?;
            let modulus = parse_num(modulus, "modulus")?;
            check_modulus(modulus)?;
            return Ok(GroupDescriptor::Vector { rank: parse_num(t, "rank")?, modulus });
        }
        for (head, make) in [
            ("Heis", GroupDescriptor::Heisenberg as fn(u32) -> GroupDescriptor),
            ("SL2", GroupDescriptor::Sl2),
        ] {
            if let Some(arg) = parenthesized(&s, head) {
                let m = parse_num(arg, "modulus")?;
                check_modulus(m)?;
                return Ok(make(m));
            }
        }
        for (head, make) in [
            ("Alt", GroupDescriptor::Alt as fn(usize) -> GroupDescriptor),
            ("Sym", GroupDescriptor::Sym),
            ("Dihedral", GroupDescriptor::Dihedral),
        ] {
            if let Some(arg) = parenthesized(&s, head) {
                return Ok(make(parse_num(arg, "degree")?));
            }
        }
        for (head, make) in [
            ("A", GroupDescriptor::Alt as fn(usize) -> GroupDescriptor),
            ("S", GroupDescriptor::Sym),
            ("D", GroupDescriptor::Dihedral),
        ] {
            if let Some(arg) = s.strip_prefix(head) {
                if !arg.is_empty() && arg.chars().all(|c| c.is_ascii_digit()) {
                    return Ok(make(parse_num(arg, "degree")?));
                }
            }
        }
        Err(Error::Parse(format!("unknown group descriptor {s:?}")))
    }
}

fn check_modulus(m: u32) -> Result<()> {
    if m < 2 {
        return Err(Error::Parse(format!("modulus must be at least 2, got {m}")));
    }
    Ok(())
}

/// Builds a catalog group with the default order bound.
pub fn make_group(descriptor: &str) -> Result<Arc<FiniteGroup>> {
    let d: GroupDescriptor = descriptor.parse()?;
    d.build(DEFAULT_ORDER_BOUND).map(Arc::new)
}

fn cycle(points: &[usize], degree: usize) -> Vec<u32> {
    let mut img = perm::identity(degree);
    for (k, &p) in points.iter().enumerate() {
        img[p] = points[(k + 1) % points.len()] as u32;
    }
    img
}

impl GroupDescriptor {
    pub fn build(&self, bound: usize) -> Result<FiniteGroup> {
        let name = self.to_string();
        match self {
            GroupDescriptor::Alt(n) => {
                let n = *n;
                if n == 0 {
                    return Err(Error::Parse("degree must be positive".into()));
                }
                let gens: Vec<Vec<u32>> = (2..n).map(|k| cycle(&[0, 1, k], n)).collect();
                FiniteGroup::generate(name, Kind::Perm { degree: n }, &gens, bound)
            }
            GroupDescriptor::Sym(n) => {
                let n = *n;
                if n == 0 {
                    return Err(Error::Parse("degree must be positive".into()));
                }
                let gens = if n == 1 {
                    Vec::new()
                } else {
                    vec![cycle(&[0, 1], n), cycle(&(0..n).collect::<Vec<_>>(), n)]
                };
                FiniteGroup::generate(name, Kind::Perm { degree: n }, &gens, bound)
            }
            GroupDescriptor::Dihedral(m) => dihedral(*m, bound),
            GroupDescriptor::Vector { rank, modulus } => {
                let mut g = vector_group(*rank, *modulus, bound)?;
                g.name = name;
                Ok(g)
            }
            GroupDescriptor::VectorAction { modulus, matrix } => {
                FiniteGroup::vector_semidirect(name, *modulus, matrix, bound)
            }
            GroupDescriptor::Heisenberg(m) => FiniteGroup::generate(
                name,
                Kind::Heisenberg { modulus: *m },
                &[vec![1, 0, 0], vec![0, 1, 0]],
                bound,
            ),
            GroupDescriptor::Sl2(m) => FiniteGroup::generate(
                name,
                Kind::Matrix { dim: 2, modulus: *m },
                &[vec![1, 1, 0, 1], vec![1, 0, 1, 1]],
                bound,
            ),
            GroupDescriptor::Gens(gens) => {
                let parsed = gens
                    .iter()
                    .map(|g| perm::parse_cycles(g, None))
                    .collect::<Result<Vec<_>>>()?;
                let n = parsed.iter().map(Vec::len).max().unwrap_or(0).max(1);
                let padded: Vec<Vec<u32>> = parsed
                    .into_iter()
                    .map(|mut p| {
                        p.extend(p.len() as u32..n as u32);
                        p
                    })
                    .collect();
                FiniteGroup::generate(name, Kind::Perm { degree: n }, &padded, bound)
            }
        }
    }
}

/// `D_m` in `Sym(m)`: rotation `x -> x+1` and reflection `x -> -x`, with
/// `AGL(1, m)` recorded as its normalizer.
fn dihedral(m: usize, bound: usize) -> Result<FiniteGroup> {
    if m < 3 {
        return Err(Error::Parse(format!("dihedral degree must be at least 3, got {m}")));
    }
    let rot: Vec<u32> = (0..m).map(|x| ((x + 1) % m) as u32).collect();
    let refl: Vec<u32> = (0..m).map(|x| ((m - x) % m) as u32).collect();
    let mut g = FiniteGroup::generate(format!("D{m}"), Kind::Perm { degree: m }, &[rot.clone(), refl], bound)?;
    let mut hint = vec![rot];
    for u in 2..m {
        if super::gcd(u as u64, m as u64) == 1 {
            hint.push((0..m).map(|x| ((x * u) % m) as u32).collect());
        }
    }
    g.set_normalizer_hint(hint);
    Ok(g)
}
