//! Exact polynomial arithmetic on C^{d|d}.
//!
//! Elements of `C[x_1..x_d] ⊗ Λ[ξ_1..ξ_d]` are stored as sparse maps from
//! monomials to rational coefficients. The odd part of a monomial is a bit
//! set, so `ξ_i² = 0` holds by construction and the canonical order of odd
//! factors is ascending index.
//!
//! Odd derivatives are LEFT derivatives: `∂/∂ξ_i` anticommutes `ξ_i` to the
//! front of the odd factor and then strikes it.
//!
//! Variable indices in the public API are 1-based (`x1`, `xi1`, ...).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{CoreError, Result};

/// Exact rational coefficient, always in lowest terms.
pub type Scalar = BigRational;

/// Maximum supported dimension (odd supports are stored in a `u32`).
pub const MAX_DIM: usize = 32;

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `(-1)^k` as a scalar.
pub fn sign(odd: bool) -> Scalar {
    if odd {
        -Scalar::one()
    } else {
        Scalar::one()
    }
}

/// Number of transpositions needed to sort the concatenation `a ++ b` of two
/// ascending odd supports, reduced mod 2.
pub fn merge_sign(a: u32, b: u32) -> bool {
    let mut parity = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        parity += (a >> j >> 1).count_ones();
        rest &= rest - 1;
    }
    parity % 2 == 1
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
    odd: u32,
}

impl Monomial {
    pub fn one(d: usize) -> Self {
        Monomial { exps: vec![0; d], odd: 0 }
    }

    pub fn new(exps: Vec<u32>, odd: u32) -> Self {
        Monomial { exps, odd }
    }

    /// Builds a monomial from an exponent vector and a (1-based) odd support.
    /// Returns `None` if an odd index repeats; the caller gets the sign of
    /// sorting the support separately from [`Monomial::from_odd_list`].
    pub fn from_parts(exps: Vec<u32>, odd: &[usize]) -> Option<Self> {
        let mut mask = 0u32;
        for &i in odd {
            let bit = 1u32 << (i - 1);
            if mask & bit != 0 {
                return None;
            }
            mask |= bit;
        }
        Some(Monomial { exps, odd: mask })
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn odd_mask(&self) -> u32 {
        self.odd
    }

    /// Odd support as ascending 1-based indices.
    pub fn odd_indices(&self) -> Vec<usize> {
        (0..self.exps.len())
            .filter(|&b| self.odd >> b & 1 == 1)
            .map(|b| b + 1)
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.exps.len()
    }

    pub fn x_degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn xi_degree(&self) -> usize {
        self.odd.count_ones() as usize
    }

    /// Polynomial degree counting both even and odd variables.
    pub fn total_degree(&self) -> u32 {
        self.x_degree() + self.odd.count_ones()
    }

    pub fn is_one(&self) -> bool {
        self.odd == 0 && self.exps.iter().all(|&e| e == 0)
    }

    /// The monomial `ξ_1 ⋯ ξ_d`.
    pub fn top(d: usize) -> Self {
        Monomial { exps: vec![0; d], odd: full_mask(d) }
    }

    fn mul(&self, other: &Monomial) -> Option<(Monomial, bool)> {
        if self.odd & other.odd != 0 {
            return None;
        }
        let exps = self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect();
        Some((
            Monomial { exps, odd: self.odd | other.odd },
            merge_sign(self.odd, other.odd),
        ))
    }
}

pub(crate) fn full_mask(d: usize) -> u32 {
    if d >= 32 {
        u32::MAX
    } else {
        (1u32 << d) - 1
    }
}

impl Ord for Monomial {
    // Graded lexicographic: total degree first, then larger x-exponents
    // earlier in the variable list, then odd support.
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| other.exps.cmp(&self.exps))
            .then_with(|| self.odd_indices().cmp(&other.odd_indices()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Which grading [`SuperPoly::homogeneous_components`] splits by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grading {
    TotalDegree,
    XiDegree,
    /// Total degree minus two.
    Principal,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SuperPoly {
    d: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl SuperPoly {
    pub fn zero(d: usize) -> Self {
        assert!(d <= MAX_DIM, "dimension {d} exceeds {MAX_DIM}");
        SuperPoly { d, terms: BTreeMap::new() }
    }

    pub fn constant(d: usize, c: Scalar) -> Self {
        let mut p = SuperPoly::zero(d);
        p.add_term(Monomial::one(d), c);
        p
    }

    pub fn one(d: usize) -> Self {
        SuperPoly::constant(d, Scalar::one())
    }

    /// The even coordinate `x_i`.
    pub fn x(d: usize, i: usize) -> Self {
        let mut exps = vec![0; d];
        exps[i - 1] = 1;
        SuperPoly::monomial(Monomial::new(exps, 0), Scalar::one())
    }

    /// The odd coordinate `ξ_i`.
    pub fn xi(d: usize, i: usize) -> Self {
        SuperPoly::monomial(Monomial::new(vec![0; d], 1 << (i - 1)), Scalar::one())
    }

    /// `ξ_1 ⋯ ξ_d`.
    pub fn top(d: usize) -> Self {
        SuperPoly::monomial(Monomial::top(d), Scalar::one())
    }

    pub fn monomial(m: Monomial, c: Scalar) -> Self {
        let mut p = SuperPoly::zero(m.dim());
        p.add_term(m, c);
        p
    }

    /// Builds `c · x^exps · ξ_{odd[0]} ⋯ ξ_{odd[k-1]}` with the odd factors in
    /// the given (possibly unsorted) order.
    pub fn term(d: usize, c: Scalar, exps: &[u32], odd: &[usize]) -> Self {
        assert_eq!(exps.len(), d);
        let mut p = SuperPoly::constant(d, c);
        let mut e = exps.to_vec();
        let x = SuperPoly::monomial(Monomial::new(std::mem::take(&mut e), 0), Scalar::one());
        p = p.mul(&x).expect("same dimension");
        for &i in odd {
            p = p.mul(&SuperPoly::xi(d, i)).expect("same dimension");
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        debug_assert_eq!(m.dim(), self.d);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_dim(&self, other: &SuperPoly) -> Result<()> {
        if self.d != other.d {
            return Err(CoreError::DimensionMismatch(self.d, other.d));
        }
        Ok(())
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.d {
            return Err(CoreError::IndexOutOfRange { index: i, dim: self.d });
        }
        Ok(())
    }

    pub fn add(&self, other: &SuperPoly) -> Result<SuperPoly> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SuperPoly) -> Result<SuperPoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> SuperPoly {
        SuperPoly {
            d: self.d,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> SuperPoly {
        if c.is_zero() {
            return SuperPoly::zero(self.d);
        }
        SuperPoly {
            d: self.d,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// In-place `self += c · other`.
    pub fn axpy(&mut self, c: &Scalar, other: &SuperPoly) {
        assert_eq!(self.d, other.d, "dimension mismatch");
        for (m, a) in &other.terms {
            self.add_term(m.clone(), a * c);
        }
    }

    /// Super product with Koszul signs on the odd factors.
    pub fn mul(&self, other: &SuperPoly) -> Result<SuperPoly> {
        self.check_dim(other)?;
        let mut out = SuperPoly::zero(self.d);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((m, neg)) = ma.mul(mb) {
                    let c = ca * cb;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// `∂/∂x_i`.
    pub fn d_even(&self, i: usize) -> Result<SuperPoly> {
        self.check_index(i)?;
        let mut out = SuperPoly::zero(self.d);
        for (m, c) in &self.terms {
            let e = m.exps[i - 1];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps.clone();
            exps[i - 1] -= 1;
            out.add_term(Monomial::new(exps, m.odd), c * int(e as i64));
        }
        Ok(out)
    }

    /// Left derivative `∂/∂ξ_i`.
    pub fn d_odd(&self, i: usize) -> Result<SuperPoly> {
        self.check_index(i)?;
        let bit = 1u32 << (i - 1);
        let mut out = SuperPoly::zero(self.d);
        for (m, c) in &self.terms {
            if m.odd & bit == 0 {
                continue;
            }
            let before = (m.odd & (bit - 1)).count_ones() % 2 == 1;
            let mono = Monomial::new(m.exps.clone(), m.odd & !bit);
            out.add_term(mono, if before { -c.clone() } else { c.clone() });
        }
        Ok(out)
    }

    /// Coefficient of the monomial `1`.
    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Monomial::one(self.d))
    }

    /// Coefficient of `ξ_1 ⋯ ξ_d` with no even factor.
    pub fn top_constant(&self) -> Scalar {
        self.coeff(&Monomial::top(self.d))
    }

    /// Set of ξ-degrees present.
    pub fn xi_degrees(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.terms.keys().map(|m| m.xi_degree()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// `Some(j)` if every term has ξ-degree `j`; zero counts as homogeneous of
    /// no particular degree and returns `None`.
    pub fn xi_degree(&self) -> Option<usize> {
        match self.xi_degrees().as_slice() {
            [j] => Some(*j),
            _ => None,
        }
    }

    /// Parity (`true` = odd) if all terms agree.
    pub fn parity(&self) -> Option<bool> {
        let mut it = self.terms.keys().map(|m| m.xi_degree() % 2 == 1);
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }

    pub fn xi_component(&self, j: usize) -> SuperPoly {
        self.filter(|m| m.xi_degree() == j)
    }

    pub fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> SuperPoly {
        SuperPoly {
            d: self.d,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Splits by the chosen grading; keys are degrees, components nonzero.
    pub fn homogeneous_components(&self, grading: Grading) -> Vec<(i64, SuperPoly)> {
        let mut parts: BTreeMap<i64, SuperPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let deg = match grading {
                Grading::TotalDegree => m.total_degree() as i64,
                Grading::XiDegree => m.xi_degree() as i64,
                Grading::Principal => m.total_degree() as i64 - 2,
            };
            parts
                .entry(deg)
                .or_insert_with(|| SuperPoly::zero(self.d))
                .add_term(m.clone(), c.clone());
        }
        parts.into_iter().collect()
    }

    pub fn max_total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    /// Parses the canonical text form, e.g. `3 + 2*x1^2*xi1*xi2 - x2`.
    pub fn parse(d: usize, s: &str) -> Result<SuperPoly> {
        parse_poly(d, s)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for SuperPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mut factors: Vec<String> = Vec::new();
            for (i, &e) in m.exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("x{}", i + 1)),
                    _ => factors.push(format!("x{}^{}", i + 1, e)),
                }
            }
            for i in m.odd_indices() {
                factors.push(format!("xi{i}"));
            }
            if factors.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", a, factors.join("*"))?;
            }
        }
        Ok(())
    }
}

fn parse_poly(d: usize, s: &str) -> Result<SuperPoly> {
    let err = |msg: &str| CoreError::Parse(format!("{msg} in {s:?}"));
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(err("empty input"));
    }
    let mut out = SuperPoly::zero(d);
    // Split into signed terms. A sign directly after '/' or '^' never occurs in
    // the canonical form, so every '+'/'-' is a term separator.
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    for ch in compact.chars() {
        if ch == '+' || ch == '-' {
            if !cur.is_empty() {
                terms.push((neg, std::mem::take(&mut cur)));
            } else if !terms.is_empty() || neg {
                return Err(err("dangling sign"));
            }
            neg = ch == '-';
        } else {
            cur.push(ch);
        }
    }
    if cur.is_empty() {
        return Err(err("trailing sign"));
    }
    terms.push((neg, cur));

    for (neg, body) in terms {
        let mut coeff = Scalar::one();
        let mut exps = vec![0u32; d];
        let mut odd: Vec<usize> = Vec::new();
        for factor in body.split('*') {
            if factor.is_empty() {
                return Err(err("empty factor"));
            }
            if let Some(rest) = factor.strip_prefix("xi") {
                let i: usize = rest.parse().map_err(|_| err("bad odd index"))?;
                if i == 0 || i > d {
                    return Err(CoreError::IndexOutOfRange { index: i, dim: d });
                }
                odd.push(i);
            } else if let Some(rest) = factor.strip_prefix('x') {
                let (idx, pow) = match rest.split_once('^') {
                    Some((a, b)) => (a, b.parse::<u32>().map_err(|_| err("bad exponent"))?),
                    None => (rest, 1),
                };
                let i: usize = idx.parse().map_err(|_| err("bad even index"))?;
                if i == 0 || i > d {
                    return Err(CoreError::IndexOutOfRange { index: i, dim: d });
                }
                exps[i - 1] += pow;
            } else {
                let (n, den) = match factor.split_once('/') {
                    Some((a, b)) => (a, b),
                    None => (factor, "1"),
                };
                let n: BigInt = n.parse().map_err(|_| err("bad numerator"))?;
                let den: BigInt = den.parse().map_err(|_| err("bad denominator"))?;
                if den.is_zero() {
                    return Err(err("zero denominator"));
                }
                coeff *= BigRational::new(n, den);
            }
        }
        if neg {
            coeff = -coeff;
        }
        let t = SuperPoly::term(d, coeff, &exps, &odd);
        out = out.add(&t)?;
    }
    Ok(out)
}

/// Seeded random element with coefficients in `{-3..3}`.
///
/// `max_total_degree` bounds the degree counting both x and ξ factors; with
/// `xi_degree = Some(j)` every term has ξ-degree exactly `j`.
pub fn random_poly<R: Rng + ?Sized>(
    rng: &mut R,
    d: usize,
    max_total_degree: u32,
    xi_degree: Option<usize>,
) -> SuperPoly {
    let mut out = SuperPoly::zero(d);
    let n_terms = rng.gen_range(1..=4);
    for _ in 0..n_terms {
        let q = match xi_degree {
            Some(j) => j,
            None => rng.gen_range(0..=d.min(max_total_degree as usize)),
        };
        if q > d || q as u32 > max_total_degree {
            continue;
        }
        // random q-subset of {0..d-1}
        let mut pool: Vec<usize> = (0..d).collect();
        let mut mask = 0u32;
        for _ in 0..q {
            let k = rng.gen_range(0..pool.len());
            mask |= 1 << pool.swap_remove(k);
        }
        let budget = max_total_degree - q as u32;
        let a = rng.gen_range(0..=budget);
        let mut exps = vec![0u32; d];
        for _ in 0..a {
            exps[rng.gen_range(0..d)] += 1;
        }
        let c = rng.gen_range(-3i64..=3);
        out.add_term(Monomial::new(exps, mask), int(c));
    }
    out
}

pub fn random_poly_seeded(d: usize, max_total_degree: u32, xi_degree: Option<usize>, seed: u64) -> SuperPoly {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_poly(&mut rng, d, max_total_degree, xi_degree)
}

/// Every monomial of `C^{d|d}` with total degree at most `max_total_degree`.
pub fn monomial_basis(d: usize, max_total_degree: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for mask in 0..=full_mask(d) {
        let q = mask.count_ones();
        if q > max_total_degree {
            continue;
        }
        let mut exps = vec![0u32; d];
        collect_exponents(&mut exps, 0, max_total_degree - q, mask, &mut out);
    }
    out.sort();
    out
}

fn collect_exponents(exps: &mut Vec<u32>, pos: usize, budget: u32, mask: u32, out: &mut Vec<Monomial>) {
    if pos == exps.len() {
        out.push(Monomial::new(exps.clone(), mask));
        return;
    }
    for e in 0..=budget {
        exps[pos] = e;
        collect_exponents(exps, pos + 1, budget - e, mask, out);
    }
    exps[pos] = 0;
}
