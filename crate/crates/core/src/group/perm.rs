//! Permutations as image arrays on `0..n`, written externally in 1-based
//! disjoint-cycle notation.
//!
//! Products act on the right: `compose(g, h)` applies `g` first, then `h`.

use crate::error::{Error, Result};

pub fn identity(degree: usize) -> Vec<u32> {
    (0..degree as u32).collect()
}

/// `g` then `h`.
pub fn compose(g: &[u32], h: &[u32]) -> Vec<u32> {
    g.iter().map(|&i| h[i as usize]).collect()
}

pub fn invert(g: &[u32]) -> Vec<u32> {
    let mut inv = vec![0; g.len()];
    for (i, &j) in g.iter().enumerate() {
        inv[j as usize] = i as u32;
    }
    inv
}

/// Disjoint cycles including fixed points, each starting at its least symbol.
pub fn cycles(g: &[u32]) -> Vec<Vec<u32>> {
    let mut seen = vec![false; g.len()];
    let mut out = Vec::new();
    for start in 0..g.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cycle.push(i as u32);
            i = g[i] as usize;
        }
        out.push(cycle);
    }
    out
}

pub fn cycle_count(g: &[u32]) -> usize {
    cycles(g).len()
}

/// Sorted cycle lengths, longest first.
pub fn cycle_type(g: &[u32]) -> Vec<usize> {
    let mut t: Vec<usize> = cycles(g).iter().map(Vec::len).collect();
    t.sort_unstable_by(|a, b| b.cmp(a));
    t
}

/// `(1,2,3)(4,5)`; the identity prints as `()`.
pub fn format_cycles(g: &[u32]) -> String {
    let mut s = String::new();
    for c in cycles(g) {
        if c.len() < 2 {
            continue;
        }
        s.push('(');
        let parts: Vec<String> = c.iter().map(|i| (i + 1).to_string()).collect();
        s.push_str(&parts.join(","));
        s.push(')');
    }
    if s.is_empty() {
        s.push_str("()");
    }
    s
}

/// Parses 1-based cycle notation. Symbols may be separated by commas or
/// whitespace. When `degree` is `None` the largest symbol fixes the degree.
pub fn parse_cycles(s: &str, degree: Option<usize>) -> Result<Vec<u32>> {
    let s = s.trim();
    let mut parsed: Vec<Vec<usize>> = Vec::new();
    let mut rest = s;
    while !rest.is_empty() {
        rest = rest.trim_start();
        if rest.is_empty() {
            break;
        }
        if !rest.starts_with('(') {
            return Err(Error::Parse(format!("expected '(' in permutation {s:?}")));
        }
        let close = rest
            .find(')')
            .ok_or_else(|| Error::Parse(format!("unbalanced parentheses in {s:?}")))?;
        let body = &rest[1..close];
        let mut cycle = Vec::new();
        for tok in body.split(|c: char| c == ',' || c.is_whitespace()) {
            if tok.is_empty() {
                continue;
            }
            let v: usize = tok
                .parse()
                .map_err(|_| Error::Parse(format!("bad symbol {tok:?} in {s:?}")))?;
            if v == 0 {
                return Err(Error::Parse(format!("symbols are 1-based, got 0 in {s:?}")));
            }
            cycle.push(v - 1);
        }
        parsed.push(cycle);
        rest = &rest[close + 1..];
    }
    let max = parsed.iter().flatten().map(|&v| v + 1).max().unwrap_or(0);
    let n = match degree {
        Some(d) if max > d => {
            return Err(Error::Parse(format!("symbol {max} exceeds degree {d} in {s:?}")))
        }
        Some(d) => d,
        None => max,
    };
    let mut img = identity(n);
    let mut touched = vec![false; n];
    for c in &parsed {
        for &v in c {
            if touched[v] {
                return Err(Error::Parse(format!("cycles are not disjoint in {s:?}")));
            }
            touched[v] = true;
        }
        for (k, &v) in c.iter().enumerate() {
            img[v] = c[(k + 1) % c.len()] as u32;
        }
    }
    Ok(img)
}

/// Whether the group generated by `gens` is transitive on `0..degree`.
pub fn is_transitive(gens: &[&[u32]], degree: usize) -> bool {
    if degree == 0 {
        return true;
    }
    let mut seen = vec![false; degree];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(i) = stack.pop() {
        for g in gens {
            let j = g[i] as usize;
            if !seen[j] {
                seen[j] = true;
                count += 1;
                stack.push(j);
            }
        }
    }
    count == degree
}
