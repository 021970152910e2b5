//! Field complexes of minimal BCOV theory and its k-potential variants on C^d,
//! with the differential `Q = tΔ` and the comparison map `Φ`.
//!
//! A summand is `t^i PV^j`. Potential variants carry a second tower
//! `t^{−m} PV^{k+m+1}`, tagged separately because for small `m` its indices
//! coincide with summands of the standard tower. Cohomology carriers add a
//! one-dimensional central slot.
//!
//! Parities are those of the shifted (odd-bracket) presentation, mod 2:
//! `j` on `t^i PV^j`, `j − 1` on the potential tower, `d − 1` on the centre.
//! With these, `Q` is odd and `Φ` is even.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::contraction::{closed_part, contraction_k};
use crate::error::{CoreError, Result};
use crate::pvcalc::{divergence, PolyVector};
use crate::superpoly::{int, random_poly, Scalar, SuperPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Tower {
    Standard,
    Potential,
    Central,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SummandIndex {
    pub tower: Tower,
    pub t_power: i32,
    pub xi_degree: usize,
}

impl SummandIndex {
    pub fn standard(t_power: i32, xi_degree: usize) -> Self {
        SummandIndex { tower: Tower::Standard, t_power, xi_degree }
    }

    pub fn potential(t_power: i32, xi_degree: usize) -> Self {
        SummandIndex { tower: Tower::Potential, t_power, xi_degree }
    }

    pub fn central() -> Self {
        SummandIndex { tower: Tower::Central, t_power: 0, xi_degree: 0 }
    }

    /// Shifted parity (`true` = odd) in dimension `d`.
    pub fn parity(&self, d: usize) -> bool {
        match self.tower {
            Tower::Standard => self.xi_degree % 2 == 1,
            Tower::Potential => (self.xi_degree + 1) % 2 == 1,
            Tower::Central => (d + 1) % 2 == 1,
        }
    }
}

impl fmt::Display for SummandIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.tower {
            Tower::Standard => write!(f, "t^{} PV^{}", self.t_power, self.xi_degree),
            Tower::Potential => write!(f, "pot t^{} PV^{}", self.t_power, self.xi_degree),
            Tower::Central => write!(f, "C"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    Mbcov,
    /// `k`-potentials, `2 ≤ k ≤ d−1`.
    Potential(usize),
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::Mbcov => write!(f, "mbcov"),
            Variant::Potential(k) => write!(f, "potential({k})"),
        }
    }
}

impl Variant {
    /// Checks the variant is defined in dimension `d`.
    ///
    /// The self-paired case `d = 2k + 1` is accepted; see [`Variant::is_presymplectic`].
    pub fn validate(&self, d: usize) -> Result<()> {
        if !(1..=crate::superpoly::MAX_DIM).contains(&d) {
            return Err(CoreError::UnsupportedDimension(d));
        }
        match *self {
            Variant::Mbcov if d < 2 => Err(CoreError::InvalidConfig(format!("mbcov needs d >= 2, got {d}"))),
            Variant::Potential(k) if k < 2 || k + 1 > d => {
                Err(CoreError::InvalidConfig(format!("potential variant needs 2 <= k <= d-1, got d={d}, k={k}")))
            }
            _ => Ok(()),
        }
    }

    /// `d` odd and `k = (d−1)/2`: the potential tower pairs with itself and the
    /// shifted symplectic structure degenerates.
    pub fn is_presymplectic(&self, d: usize) -> bool {
        matches!(*self, Variant::Potential(k) if d % 2 == 1 && 2 * k + 1 == d)
    }
}

/// An element of a field complex or carrier: polyvectors indexed by summand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescendantField {
    d: usize,
    comps: BTreeMap<SummandIndex, SuperPoly>,
}

impl DescendantField {
    pub fn zero(d: usize) -> Self {
        DescendantField { d, comps: BTreeMap::new() }
    }

    pub fn single(idx: SummandIndex, mu: PolyVector) -> Self {
        let mut f = DescendantField::zero(mu.dim());
        f.add_component(idx, &mu).expect("same dimension");
        f
    }

    /// A central-slot element with value `c`.
    pub fn central(d: usize, c: Scalar) -> Self {
        DescendantField::single(SummandIndex::central(), SuperPoly::constant(d, c))
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn components(&self) -> impl Iterator<Item = (&SummandIndex, &PolyVector)> {
        self.comps.iter()
    }

    pub fn component(&self, idx: &SummandIndex) -> PolyVector {
        self.comps.get(idx).cloned().unwrap_or_else(|| SuperPoly::zero(self.d))
    }

    pub fn indices(&self) -> Vec<SummandIndex> {
        self.comps.keys().copied().collect()
    }

    pub fn add_component(&mut self, idx: SummandIndex, mu: &PolyVector) -> Result<()> {
        if mu.dim() != self.d {
            return Err(CoreError::DimensionMismatch(self.d, mu.dim()));
        }
        if mu.is_zero() {
            return Ok(());
        }
        let entry = self.comps.entry(idx).or_insert_with(|| SuperPoly::zero(self.d));
        *entry = entry.add(mu)?;
        if entry.is_zero() {
            self.comps.remove(&idx);
        }
        Ok(())
    }

    pub fn add(&self, other: &DescendantField) -> Result<DescendantField> {
        let mut out = self.clone();
        for (i, m) in &other.comps {
            out.add_component(*i, m)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &DescendantField) -> Result<DescendantField> {
        self.add(&other.scale(&int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> DescendantField {
        let mut out = DescendantField::zero(self.d);
        for (i, m) in &self.comps {
            out.add_component(*i, &m.scale(c)).expect("same dimension");
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Shifted parity if every component agrees.
    pub fn parity(&self) -> Option<bool> {
        let mut it = self.comps.keys().map(|i| i.parity(self.d));
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }

    /// Value of the central slot.
    pub fn central_value(&self) -> Scalar {
        self.component(&SummandIndex::central()).constant_term()
    }

    pub fn to_text(&self) -> String {
        if self.comps.is_empty() {
            return "0".into();
        }
        self.comps
            .iter()
            .map(|(i, m)| format!("[{i}] {m}"))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

impl Serialize for DescendantField {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(self.comps.len()))?;
        for (i, m) in &self.comps {
            map.serialize_entry(&i.to_string(), &m.to_text())?;
        }
        map.end()
    }
}

/// A field complex: dimension plus variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Complex {
    d: usize,
    variant: Variant,
}

impl Complex {
    pub fn new(d: usize, variant: Variant) -> Result<Self> {
        variant.validate(d)?;
        Ok(Complex { d, variant })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// The potential index `k`, if any.
    pub fn k(&self) -> Option<usize> {
        match self.variant {
            Variant::Mbcov => None,
            Variant::Potential(k) => Some(k),
        }
    }

    /// Every summand of the complex, in canonical order.
    pub fn summands(&self) -> Vec<SummandIndex> {
        let d = self.d as i32;
        let mut out = Vec::new();
        for i in 0..d {
            for j in 0..(d - i) {
                if Some((i + j) as usize) == self.k() {
                    continue;
                }
                out.push(SummandIndex::standard(i, j as usize));
            }
        }
        if let Some(k) = self.k() {
            for m in 0..(self.d - k) {
                out.push(SummandIndex::potential(-(m as i32), k + m + 1));
            }
        }
        out.sort();
        out
    }

    pub fn contains(&self, idx: &SummandIndex) -> bool {
        self.summands().contains(idx)
    }

    /// The summand `t^{k−d+1} PV^d` holding the central slot under ι.
    pub fn potential_top(&self) -> Option<SummandIndex> {
        self.k().map(|k| SummandIndex::potential(k as i32 + 1 - self.d as i32, self.d))
    }

    fn whole_top(&self) -> bool {
        self.k() == Some(self.d - 1)
    }

    /// Summands of the cohomology carrier.
    pub fn carrier_summands(&self) -> Vec<SummandIndex> {
        let mut out: Vec<SummandIndex> = (0..self.d)
            .filter(|&j| Some(j) != self.k())
            .filter(|&j| !(self.whole_top() && j == self.d - 1))
            .map(|j| SummandIndex::standard(0, j))
            .collect();
        if let Some(k) = self.k() {
            out.push(SummandIndex::potential(0, k + 1));
            if !self.whole_top() {
                out.push(SummandIndex::central());
            }
        }
        out.sort();
        out
    }

    /// Human-readable description of the carrier.
    pub fn cohomology_model(&self) -> Vec<String> {
        self.carrier_summands()
            .iter()
            .map(|i| match i.tower {
                Tower::Standard => format!("ker Δ in PV^{}", i.xi_degree),
                Tower::Potential if self.whole_top() => format!("PV^{}", self.d),
                Tower::Potential => format!("PV^{} / Δ PV^{}", i.xi_degree, i.xi_degree + 1),
                Tower::Central => "C (constants in the top potential summand)".to_string(),
            })
            .collect()
    }

    fn check_component(&self, idx: &SummandIndex, mu: &PolyVector, carrier: bool) -> Result<()> {
        let valid = if carrier { self.carrier_summands().contains(idx) } else { self.contains(idx) };
        if !valid {
            return Err(CoreError::MalformedField(format!("{idx} is not a summand of {}", self.variant)));
        }
        let expected = if idx.tower == Tower::Central { 0 } else { idx.xi_degree };
        if mu.xi_degrees().iter().any(|&j| j != expected) {
            return Err(CoreError::MalformedField(format!("component at {idx} is not of ξ-degree {expected}: {mu}")));
        }
        Ok(())
    }

    /// Checks indices and ξ-homogeneity of every component.
    pub fn validate(&self, psi: &DescendantField) -> Result<()> {
        if psi.dim() != self.d {
            return Err(CoreError::DimensionMismatch(self.d, psi.dim()));
        }
        for (i, m) in psi.components() {
            self.check_component(i, m, false)?;
        }
        Ok(())
    }

    /// Membership in the cohomology carrier, as canonical representatives.
    pub fn check_carrier(&self, psi: &DescendantField) -> Result<()> {
        if psi.dim() != self.d {
            return Err(CoreError::DimensionMismatch(self.d, psi.dim()));
        }
        for (i, m) in psi.components() {
            self.check_component(i, m, true)?;
            let ok = match i.tower {
                Tower::Standard => divergence(m).is_zero(),
                Tower::Potential if self.whole_top() => true,
                Tower::Potential => contraction_k(&divergence(m)) == *m,
                Tower::Central => m.terms().all(|(mono, _)| mono.is_one()),
            };
            if !ok {
                return Err(CoreError::NotInCarrier(format!("[{i}] {m}")));
            }
        }
        Ok(())
    }

    /// `Q = tΔ`. A nonzero image outside the complex is an error.
    pub fn differential(&self, psi: &DescendantField) -> Result<DescendantField> {
        self.validate(psi)?;
        let mut out = DescendantField::zero(self.d);
        for (idx, mu) in psi.components() {
            let target = match idx.tower {
                Tower::Standard if idx.xi_degree > 0 => SummandIndex::standard(idx.t_power + 1, idx.xi_degree - 1),
                Tower::Potential if idx.t_power < 0 => SummandIndex::potential(idx.t_power + 1, idx.xi_degree - 1),
                _ => continue,
            };
            let image = divergence(mu);
            if image.is_zero() {
                continue;
            }
            if !self.contains(&target) {
                return Err(CoreError::MalformedField(format!("tΔ of [{idx}] leaves the complex")));
            }
            out.add_component(target, &image)?;
        }
        Ok(out)
    }

    /// `Φ`: identity on the standard tower, `Δ` from `PV^{k+1}` to `t^0 PV^k`,
    /// zero on the rest of the potential tower.
    pub fn phi_map(&self, psi: &DescendantField) -> Result<DescendantField> {
        let k = self
            .k()
            .ok_or_else(|| CoreError::InvalidConfig("Φ is defined on potential variants".into()))?;
        let mut out = DescendantField::zero(self.d);
        for (idx, mu) in psi.components() {
            match idx.tower {
                Tower::Standard => out.add_component(*idx, mu)?,
                Tower::Potential if idx.t_power == 0 => out.add_component(SummandIndex::standard(0, k), &divergence(mu))?,
                _ => {}
            }
        }
        Ok(out)
    }

    /// The mbcov complex receiving `Φ`.
    pub fn phi_target(&self) -> Result<Complex> {
        Complex::new(self.d, Variant::Mbcov)
    }

    /// Seeded sample of the carrier summand `idx`.
    pub fn random_carrier_element<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        idx: &SummandIndex,
        max_degree: u32,
    ) -> Result<DescendantField> {
        let d = self.d;
        let raw = |rng: &mut R| random_poly(rng, d, max_degree.max(idx.xi_degree as u32), Some(idx.xi_degree));
        let mu = match idx.tower {
            Tower::Standard => closed_part(&raw(rng)),
            Tower::Potential if self.whole_top() => raw(rng),
            Tower::Potential => quotient_class(&raw(rng)),
            Tower::Central => SuperPoly::constant(d, int(rng.gen_range(-3..=3))),
        };
        Ok(DescendantField::single(*idx, mu))
    }

    /// Seeded field with a sample in every summand.
    pub fn random_field<R: Rng + ?Sized>(&self, rng: &mut R, max_degree: u32) -> DescendantField {
        let mut out = DescendantField::zero(self.d);
        for idx in self.summands() {
            let mu = random_poly(rng, self.d, max_degree.max(idx.xi_degree as u32), Some(idx.xi_degree));
            out.add_component(idx, &mu).expect("same dimension");
        }
        out
    }
}

/// Canonical representative `KΔw` of the class of `w` in `PV^{k+1} / Δ PV^{k+2}`.
pub fn quotient_class(w: &PolyVector) -> PolyVector {
    contraction_k(&divergence(w))
}
