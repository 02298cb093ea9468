//! Finite groups realized by explicit enumeration.
//!
//! Every group is fully enumerated at construction. Elements are addressed
//! by [`Elem`], an index into the enumeration; the enumeration is sorted by
//! the element's underlying datum, so index order is the lexicographic order
//! of data and is stable across runs and generator choices.

mod catalog;
mod classes;
mod hom;
mod normalizer;
pub mod perm;

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};

pub use catalog::{make_group, parse_matrix, GroupDescriptor};
pub use classes::{ClassVector, ConjugacyClass};
pub use hom::GroupHom;
pub use normalizer::{conjugation_tables, normalizer_in_sym};

/// Default bound on enumerated group orders.
pub const DEFAULT_ORDER_BOUND: usize = 1_000_000;

/// Groups up to this order keep a full multiplication table.
const TABLE_LIMIT: usize = 1200;

/// An element of a [`FiniteGroup`], by position in its sorted enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Elem(pub u32);

impl Elem {
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

/// Arithmetic of the underlying data.
#[derive(Clone, Debug)]
pub enum Kind {
    /// Image arrays on `0..degree`, acting on the right.
    Perm { degree: usize },
    /// `(Z/modulus)^rank` under addition.
    Vector { rank: usize, modulus: u32 },
    /// Upper unitriangular 3x3 matrices `M(x,y,z)` stored as `[x, y, z]`.
    Heisenberg { modulus: u32 },
    /// Invertible `dim x dim` matrices mod `modulus`, row-major.
    Matrix { dim: usize, modulus: u32 },
    /// `N x| H` with data `[n, h]` (indices into the factors).
    Semidirect(Arc<SemidirectData>),
    /// `P / K` with data `[least element of the coset]`.
    Quotient(Arc<QuotientData>),
}

/// Multiplication `(n1, h1)(n2, h2) = (n1 * act_h1(n2), h1 h2)`.
#[derive(Debug)]
pub struct SemidirectData {
    pub normal: Arc<FiniteGroup>,
    pub complement: Arc<FiniteGroup>,
    /// `action[h][n]` is the index of `act_h(n)` in `normal`.
    pub action: Vec<Vec<u32>>,
}

#[derive(Debug)]
pub struct QuotientData {
    pub parent: Arc<FiniteGroup>,
    pub kernel: Vec<Elem>,
    coset_min: Vec<u32>,
}

impl Kind {
    fn identity_code(&self) -> Vec<u32> {
        match self {
            Kind::Perm { degree } => perm::identity(*degree),
            Kind::Vector { rank, .. } => vec![0; *rank],
            Kind::Heisenberg { .. } => vec![0; 3],
            Kind::Matrix { dim, .. } => {
                let mut m = vec![0; dim * dim];
                for i in 0..*dim {
                    m[i * dim + i] = 1;
                }
                m
            }
            Kind::Semidirect(sd) => vec![sd.normal.identity().0, sd.complement.identity().0],
            Kind::Quotient(q) => vec![q.coset_min[q.parent.identity().idx()]],
        }
    }

    fn mul_code(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        match self {
            Kind::Perm { .. } => perm::compose(a, b),
            Kind::Vector { modulus, .. } => {
                let m = *modulus as u64;
                a.iter().zip(b).map(|(&x, &y)| ((x as u64 + y as u64) % m) as u32).collect()
            }
            Kind::Heisenberg { modulus } => {
                let m = *modulus as u64;
                let (x, y, z) = (a[0] as u64, a[1] as u64, a[2] as u64);
                let (x2, y2, z2) = (b[0] as u64, b[1] as u64, b[2] as u64);
                vec![
                    ((x + x2) % m) as u32,
                    ((y + y2) % m) as u32,
                    ((z + z2 + x * y2) % m) as u32,
                ]
            }
            Kind::Matrix { dim, modulus } => {
                let (d, m) = (*dim, *modulus as u64);
                let mut out = vec![0u32; d * d];
                for i in 0..d {
                    for j in 0..d {
                        let mut acc = 0u64;
                        for k in 0..d {
                            acc += a[i * d + k] as u64 * b[k * d + j] as u64;
                        }
                        out[i * d + j] = (acc % m) as u32;
                    }
                }
                out
            }
            Kind::Semidirect(sd) => {
                let moved = sd.action[a[1] as usize][b[0] as usize];
                let n = sd.normal.mul(Elem(a[0]), Elem(moved));
                let h = sd.complement.mul(Elem(a[1]), Elem(b[1]));
                vec![n.0, h.0]
            }
            Kind::Quotient(q) => {
                let p = q.parent.mul(Elem(a[0]), Elem(b[0]));
                vec![q.coset_min[p.idx()]]
            }
        }
    }

    fn format_code(&self, c: &[u32]) -> String {
        match self {
            Kind::Perm { .. } => perm::format_cycles(c),
            Kind::Vector { .. } => format!("[{}]", join(c)),
            Kind::Heisenberg { .. } => format!("M({})", join(c)),
            Kind::Matrix { dim, .. } => {
                let rows: Vec<String> =
                    c.chunks(*dim).map(|r| format!("[{}]", join(r))).collect();
                format!("[{}]", rows.join(","))
            }
            Kind::Semidirect(sd) => format!(
                "({};{})",
                sd.normal.format(Elem(c[0])),
                sd.complement.format(Elem(c[1]))
            ),
            Kind::Quotient(q) => format!("{{{}}}", q.parent.format(Elem(c[0]))),
        }
    }

    pub fn is_perm(&self) -> bool {
        matches!(self, Kind::Perm { .. })
    }
}

fn join(c: &[u32]) -> String {
    c.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

/// An enumerated finite group.
pub struct FiniteGroup {
    name: String,
    kind: Kind,
    codes: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, u32>,
    generators: Vec<Elem>,
    identity: Elem,
    inverse: Vec<Elem>,
    orders: Vec<u32>,
    table: Option<Vec<u32>>,
    normalizer_hint: Option<Vec<Vec<u32>>>,
    classes: OnceLock<classes::ClassData>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("name", &self.name)
            .field("order", &self.order())
            .finish()
    }
}

impl FiniteGroup {
    /// Closes `generators` under multiplication. Fails when the closure
    /// exceeds `bound` elements.
    pub fn generate(
        name: impl Into<String>,
        kind: Kind,
        generators: &[Vec<u32>],
        bound: usize,
    ) -> Result<Self> {
        let id = kind.identity_code();
        let mut seen: HashSet<Vec<u32>> = HashSet::new();
        seen.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in generators {
                let y = kind.mul_code(&x, g);
                if !seen.contains(&y) {
                    if seen.len() >= bound {
                        return Err(Error::OrderBoundExceeded { bound });
                    }
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        let mut codes: Vec<Vec<u32>> = seen.into_iter().collect();
        codes.sort_unstable();
        Self::from_sorted_codes(name.into(), kind, codes, generators)
    }

    fn from_sorted_codes(
        name: String,
        kind: Kind,
        codes: Vec<Vec<u32>>,
        gen_codes: &[Vec<u32>],
    ) -> Result<Self> {
        let index: HashMap<Vec<u32>, u32> =
            codes.iter().enumerate().map(|(i, c)| (c.clone(), i as u32)).collect();
        let identity = Elem(index[&kind.identity_code()]);
        let generators = gen_codes
            .iter()
            .map(|c| {
                index
                    .get(c)
                    .map(|&i| Elem(i))
                    .ok_or_else(|| Error::NotInGroup(kind.format_code(c)))
            })
            .collect::<Result<Vec<_>>>()?;
        let n = codes.len();
        let mut g = FiniteGroup {
            name,
            kind,
            codes,
            index,
            generators,
            identity,
            inverse: Vec::new(),
            orders: Vec::new(),
            table: None,
            normalizer_hint: None,
            classes: OnceLock::new(),
        };
        if n <= TABLE_LIMIT {
            let mut table = vec![0u32; n * n];
            for a in 0..n {
                for b in 0..n {
                    table[a * n + b] = g.mul_slow(Elem(a as u32), Elem(b as u32)).0;
                }
            }
            g.table = Some(table);
        }
        g.compute_orders();
        Ok(g)
    }

    fn compute_orders(&mut self) {
        let n = self.order();
        let mut orders = vec![0u32; n];
        let mut inverse = vec![self.identity; n];
        for x in 0..n {
            if orders[x] != 0 {
                continue;
            }
            let x = Elem(x as u32);
            let mut powers = vec![x];
            let mut p = x;
            while p != self.identity {
                p = self.mul(p, x);
                powers.push(p);
            }
            // powers = [x, x^2, ..., x^k = e]
            let k = powers.len();
            orders[x.idx()] = k as u32;
            inverse[x.idx()] = if k == 1 { x } else { powers[k - 2] };
        }
        self.orders = orders;
        self.inverse = inverse;
    }

    fn mul_slow(&self, a: Elem, b: Elem) -> Elem {
        let c = self.kind.mul_code(&self.codes[a.idx()], &self.codes[b.idx()]);
        Elem(self.index[&c])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    pub fn order(&self) -> usize {
        self.codes.len()
    }

    pub fn identity(&self) -> Elem {
        self.identity
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn elements(&self) -> impl ExactSizeIterator<Item = Elem> + Clone {
        (0..self.codes.len() as u32).map(Elem)
    }

    /// Raw datum of an element (image array, residues, or factor indices).
    pub fn code(&self, e: Elem) -> &[u32] {
        &self.codes[e.idx()]
    }

    pub fn element(&self, code: &[u32]) -> Option<Elem> {
        self.index.get(code).map(|&i| Elem(i))
    }

    /// Degree of the permutation representation, if this is a permutation group.
    pub fn degree(&self) -> Option<usize> {
        match self.kind {
            Kind::Perm { degree } => Some(degree),
            _ => None,
        }
    }

    /// `a` then `b`.
    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.table {
            Some(t) => Elem(t[a.idx() * self.codes.len() + b.idx()]),
            None => self.mul_slow(a, b),
        }
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverse[a.idx()]
    }

    /// Least `k >= 1` with `a^k = 1`.
    #[inline]
    pub fn elem_order(&self, a: Elem) -> u64 {
        self.orders[a.idx()] as u64
    }

    pub fn pow(&self, a: Elem, k: i64) -> Elem {
        let d = self.elem_order(a) as i64;
        let mut k = k.rem_euclid(d);
        let mut base = a;
        let mut acc = self.identity;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// `g^-1 a g`.
    #[inline]
    pub fn conj(&self, a: Elem, g: Elem) -> Elem {
        self.mul(self.mul(self.inv(g), a), g)
    }

    pub fn commutator(&self, a: Elem, b: Elem) -> Elem {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn product(&self, elems: &[Elem]) -> Elem {
        elems.iter().fold(self.identity, |acc, &e| self.mul(acc, e))
    }

    pub fn format(&self, e: Elem) -> String {
        self.kind.format_code(self.code(e))
    }

    /// Parses an element in this group's display notation. Permutations may
    /// use commas or spaces inside cycles.
    pub fn parse_element(&self, s: &str) -> Result<Elem> {
        if let Kind::Perm { degree } = self.kind {
            let img = perm::parse_cycles(s, Some(degree))?;
            return self.element(&img).ok_or_else(|| Error::NotInGroup(s.to_string()));
        }
        let want: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        self.elements()
            .find(|&e| self.format(e) == want)
            .ok_or_else(|| Error::NotInGroup(s.to_string()))
    }

    /// Elements of the subgroup generated by `gens`, sorted.
    pub fn closure(&self, gens: &[Elem]) -> Vec<Elem> {
        let mut seen = vec![false; self.order()];
        let out = self.close_into(gens, &mut seen, usize::MAX);
        let mut out = out;
        out.sort_unstable();
        out
    }

    fn close_into(&self, gens: &[Elem], seen: &mut [bool], stop_above: usize) -> Vec<Elem> {
        let mut out = vec![self.identity];
        seen[self.identity.idx()] = true;
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            i += 1;
            for &s in gens {
                let y = self.mul(x, s);
                if !seen[y.idx()] {
                    seen[y.idx()] = true;
                    out.push(y);
                    if out.len() > stop_above {
                        return out;
                    }
                }
            }
        }
        out
    }

    /// Order of the subgroup generated by `gens`.
    pub fn subgroup_order(&self, gens: &[Elem]) -> usize {
        let mut seen = vec![false; self.order()];
        self.close_into(gens, &mut seen, usize::MAX).len()
    }

    /// Whether `gens` generate the whole group. Stops as soon as the closure
    /// passes half the order.
    pub fn generates(&self, gens: &[Elem]) -> bool {
        let n = self.order();
        let mut seen = vec![false; n];
        let size = self.close_into(gens, &mut seen, n / 2).len();
        size * 2 > n || size == n
    }

    /// The subgroup generated by `gens`, as a group in its own right.
    pub fn generate_subgroup(&self, gens: &[Elem]) -> Result<FiniteGroup> {
        let codes: Vec<Vec<u32>> = gens.iter().map(|&g| self.code(g).to_vec()).collect();
        let name = format!(
            "<{}>",
            gens.iter().map(|&g| self.format(g)).collect::<Vec<_>>().join(",")
        );
        FiniteGroup::generate(name, self.kind.clone(), &codes, self.order())
    }

    pub fn center(&self) -> Vec<Elem> {
        self.elements()
            .filter(|&z| {
                self.generators
                    .iter()
                    .all(|&g| self.mul(z, g) == self.mul(g, z))
            })
            .collect()
    }

    pub fn is_normal(&self, sub: &[Elem]) -> bool {
        let mut member = vec![false; self.order()];
        for &k in sub {
            member[k.idx()] = true;
        }
        sub.iter()
            .all(|&k| self.generators.iter().all(|&g| member[self.conj(k, g).idx()]))
    }

    /// Quotient by a normal subgroup given by its elements.
    pub fn quotient(self: &Arc<Self>, normal: &[Elem]) -> Result<FiniteGroup> {
        let kernel = self.closure(normal);
        if !self.is_normal(&kernel) {
            return Err(Error::Invalid("quotient by a non-normal subgroup".into()));
        }
        let mut coset_min = vec![u32::MAX; self.order()];
        for x in self.elements() {
            if coset_min[x.idx()] != u32::MAX {
                continue;
            }
            let coset: Vec<Elem> = kernel.iter().map(|&k| self.mul(x, k)).collect();
            let m = coset.iter().min().unwrap().0;
            for y in coset {
                coset_min[y.idx()] = m;
            }
        }
        let data = Arc::new(QuotientData { parent: self.clone(), kernel, coset_min });
        let gens: Vec<Vec<u32>> =
            self.generators.iter().map(|g| vec![data.coset_min[g.idx()]]).collect();
        let name = format!("{}/K{}", self.name, data.kernel.len());
        FiniteGroup::generate(name, Kind::Quotient(data), &gens, self.order())
    }

    /// Coset of a quotient element, as parent elements.
    pub fn quotient_data(&self) -> Option<&QuotientData> {
        match &self.kind {
            Kind::Quotient(q) => Some(q),
            _ => None,
        }
    }

    pub(crate) fn set_normalizer_hint(&mut self, gens: Vec<Vec<u32>>) {
        self.normalizer_hint = Some(gens);
    }

    /// Generators of `N_Sym(n)(G)` supplied by the catalog, if any.
    pub fn normalizer_hint(&self) -> Option<&[Vec<u32>]> {
        self.normalizer_hint.as_deref()
    }

    /// `(Z/m)^t x| Z/ord(M)` with the complement generator acting by `matrix`
    /// on column vectors.
    pub fn vector_semidirect(
        name: impl Into<String>,
        modulus: u32,
        matrix: &[Vec<i64>],
        bound: usize,
    ) -> Result<FiniteGroup> {
        let t = matrix.len();
        if t == 0 || matrix.iter().any(|r| r.len() != t) {
            return Err(Error::Parse("action matrix must be square and nonempty".into()));
        }
        let m = modulus as i64;
        let reduced: Vec<Vec<u32>> = matrix
            .iter()
            .map(|r| r.iter().map(|&v| v.rem_euclid(m) as u32).collect())
            .collect();
        if gcd(det_mod(&reduced, modulus) as u64, modulus as u64) != 1 {
            return Err(Error::ActionNotInvertible { modulus: modulus as u64 });
        }
        let normal = Arc::new(vector_group(t, modulus, bound)?);
        let order = matrix_order(&reduced, modulus, bound)?;
        let complement = Arc::new(vector_group(1, order as u32, bound)?);
        // action[h][n] = M^h n
        let mut action = Vec::with_capacity(order);
        let mut power = identity_matrix(t);
        for _ in 0..order {
            let row: Vec<u32> = normal
                .elements()
                .map(|n| {
                    let v = apply_matrix(&power, normal.code(n), modulus);
                    normal.element(&v).expect("vector group is closed").0
                })
                .collect();
            action.push(row);
            power = mat_mul(&reduced, &power, modulus);
        }
        // complement elements are sorted by exponent, so index h is the h-th power
        let data = Arc::new(SemidirectData { normal: normal.clone(), complement: complement.clone(), action });
        let mut gens = Vec::new();
        for i in 0..t {
            let mut v = vec![0u32; t];
            v[i] = 1 % modulus;
            gens.push(vec![normal.element(&v).unwrap().0, complement.identity().0]);
        }
        gens.push(vec![normal.identity().0, complement.element(&[1 % order as u32]).unwrap().0]);
        FiniteGroup::generate(name, Kind::Semidirect(data), &gens, bound)
    }

    /// `N x| H` with the action given by automorphism tables of `normal`,
    /// one per generator of `complement`. The tables are extended to all of
    /// `complement` and checked for consistency.
    pub fn semidirect(
        name: impl Into<String>,
        normal: Arc<FiniteGroup>,
        complement: Arc<FiniteGroup>,
        generator_actions: &[Vec<u32>],
        bound: usize,
    ) -> Result<FiniteGroup> {
        if generator_actions.len() != complement.generators().len() {
            return Err(Error::Invalid("one automorphism per complement generator required".into()));
        }
        for a in generator_actions {
            if !is_automorphism(&normal, a) {
                return Err(Error::NotHomomorphism);
            }
        }
        let n = complement.order();
        let mut action: Vec<Option<Vec<u32>>> = vec![None; n];
        action[complement.identity().idx()] = Some((0..normal.order() as u32).collect());
        let mut queue = VecDeque::from([complement.identity()]);
        // act_{h s} = act_h o act_s
        while let Some(h) = queue.pop_front() {
            let ah = action[h.idx()].clone().unwrap();
            for (s, a_s) in complement.generators().iter().zip(generator_actions) {
                let hs = complement.mul(h, *s);
                let composed: Vec<u32> = a_s.iter().map(|&x| ah[x as usize]).collect();
                match &action[hs.idx()] {
                    Some(existing) if *existing != composed => return Err(Error::NotHomomorphism),
                    Some(_) => {}
                    None => {
                        action[hs.idx()] = Some(composed);
                        queue.push_back(hs);
                    }
                }
            }
        }
        let action: Vec<Vec<u32>> = action.into_iter().map(Option::unwrap).collect();
        let data = Arc::new(SemidirectData { normal: normal.clone(), complement: complement.clone(), action });
        let mut gens: Vec<Vec<u32>> = normal
            .generators()
            .iter()
            .map(|g| vec![g.0, complement.identity().0])
            .collect();
        gens.extend(complement.generators().iter().map(|h| vec![normal.identity().0, h.0]));
        FiniteGroup::generate(name, Kind::Semidirect(data), &gens, bound)
    }

    /// Factor indices of a semidirect product element.
    pub fn semidirect_parts(&self, e: Elem) -> Option<(Elem, Elem)> {
        match &self.kind {
            Kind::Semidirect(_) => {
                let c = self.code(e);
                Some((Elem(c[0]), Elem(c[1])))
            }
            _ => None,
        }
    }

    pub fn semidirect_data(&self) -> Option<&SemidirectData> {
        match &self.kind {
            Kind::Semidirect(sd) => Some(sd),
            _ => None,
        }
    }
}

/// Whether the table is a bijective endomorphism of `g`.
pub(crate) fn is_automorphism(g: &FiniteGroup, table: &[u32]) -> bool {
    if table.len() != g.order() {
        return false;
    }
    let mut hit = vec![false; g.order()];
    for &t in table {
        if t as usize >= g.order() || hit[t as usize] {
            return false;
        }
        hit[t as usize] = true;
    }
    g.elements().all(|x| {
        g.generators().iter().all(|&s| {
            table[g.mul(x, s).idx()] == g.mul(Elem(table[x.idx()]), Elem(table[s.idx()])).0
        })
    })
}

pub(crate) fn vector_group(rank: usize, modulus: u32, bound: usize) -> Result<FiniteGroup> {
    let gens: Vec<Vec<u32>> = (0..rank)
        .map(|i| {
            let mut v = vec![0u32; rank];
            v[i] = 1 % modulus;
            v
        })
        .collect();
    let name = if rank == 1 { format!("Z/{modulus}") } else { format!("V({rank},{modulus})") };
    FiniteGroup::generate(name, Kind::Vector { rank, modulus }, &gens, bound)
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Inverse of `a` mod `m`, if it exists.
pub fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    let (mut r0, mut r1) = (a.rem_euclid(m), m);
    let (mut s0, mut s1) = (1i64, 0i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 == 1 || m == 1 {
        Some(s0.rem_euclid(m))
    } else {
        None
    }
}

fn identity_matrix(t: usize) -> Vec<Vec<u32>> {
    (0..t).map(|i| (0..t).map(|j| (i == j) as u32).collect()).collect()
}

fn mat_mul(a: &[Vec<u32>], b: &[Vec<u32>], m: u32) -> Vec<Vec<u32>> {
    let t = a.len();
    (0..t)
        .map(|i| {
            (0..t)
                .map(|j| {
                    ((0..t).map(|k| a[i][k] as u64 * b[k][j] as u64).sum::<u64>() % m as u64) as u32
                })
                .collect()
        })
        .collect()
}

fn apply_matrix(a: &[Vec<u32>], v: &[u32], m: u32) -> Vec<u32> {
    a.iter()
        .map(|row| (row.iter().zip(v).map(|(&x, &y)| x as u64 * y as u64).sum::<u64>() % m as u64) as u32)
        .collect()
}

fn matrix_order(a: &[Vec<u32>], m: u32, bound: usize) -> Result<usize> {
    let id = identity_matrix(a.len());
    let mut p = a.to_vec();
    let mut k = 1;
    while p != id {
        p = mat_mul(&p, a, m);
        k += 1;
        if k > bound {
            return Err(Error::OrderBoundExceeded { bound });
        }
    }
    Ok(k)
}

fn det_mod(a: &[Vec<u32>], m: u32) -> u32 {
    // cofactor expansion; matrices here are tiny
    let t = a.len();
    if t == 1 {
        return a[0][0] % m;
    }
    let mut acc: i64 = 0;
    for j in 0..t {
        let minor: Vec<Vec<u32>> = a[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect())
            .collect();
        let term = a[0][j] as i64 * det_mod(&minor, m) as i64;
        acc += if j % 2 == 0 { term } else { -term };
    }
    acc.rem_euclid(m as i64) as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a4() -> FiniteGroup {
        let g1 = perm::parse_cycles("(1,2,3)", Some(4)).unwrap();
        let g2 = perm::parse_cycles("(2,3,4)", Some(4)).unwrap();
        FiniteGroup::generate("A4", Kind::Perm { degree: 4 }, &[g1, g2], 100).unwrap()
    }

    #[test]
    fn enumeration_is_sorted_and_closed() {
        let g = a4();
        assert_eq!(g.order(), 12);
        assert_eq!(g.identity(), Elem(0));
        for a in g.elements() {
            assert_eq!(g.mul(a, g.inv(a)), g.identity());
            for b in g.elements() {
                assert!(g.mul(a, b).idx() < 12);
            }
        }
        assert!(g.elements().zip(g.elements().skip(1)).all(|(a, b)| g.code(a) < g.code(b)));
    }

    #[test]
    fn orders() {
        let g = a4();
        let c = g.parse_element("(1,2,3)").unwrap();
        assert_eq!(g.elem_order(c), 3);
        assert_eq!(g.elem_order(g.identity()), 1);
        assert_eq!(g.pow(c, -1), g.inv(c));
    }

    #[test]
    fn bound_is_an_error() {
        let g1 = perm::parse_cycles("(1,2,3)", Some(4)).unwrap();
        let g2 = perm::parse_cycles("(2,3,4)", Some(4)).unwrap();
        let err = FiniteGroup::generate("A4", Kind::Perm { degree: 4 }, &[g1, g2], 11).unwrap_err();
        assert_eq!(err, Error::OrderBoundExceeded { bound: 11 });
    }

    #[test]
    fn semidirect_75() {
        let g = FiniteGroup::vector_semidirect("V", 5, &[vec![0, -1], vec![1, -1]], 1000).unwrap();
        assert_eq!(g.order(), 75);
        let singular = FiniteGroup::vector_semidirect("V", 5, &[vec![1, 1], vec![1, 1]], 1000);
        assert_eq!(singular.unwrap_err(), Error::ActionNotInvertible { modulus: 5 });
    }

    #[test]
    fn quotient_of_klein_normal() {
        let g = Arc::new(a4());
        let v: Vec<Elem> = ["(1,2)(3,4)", "(1,3)(2,4)"]
            .iter()
            .map(|s| g.parse_element(s).unwrap())
            .collect();
        let q = g.quotient(&v).unwrap();
        assert_eq!(q.order(), 3);
    }

    #[test]
    fn modular_helpers() {
        assert_eq!(mod_inverse(2, 9), Some(5));
        assert_eq!(mod_inverse(3, 9), None);
        assert_eq!(lcm(4, 6), 12);
    }
}
