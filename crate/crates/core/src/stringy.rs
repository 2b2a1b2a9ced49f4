//! Sectors, ages and the star product of the stringy Chow ring.
//!
//! A sector is an injective `ζ: μ_r → 𝔾_m`, encoded by the reduced fraction
//! `arg ζ = c/r`. The untwisted sector carries the blowup ring of pairs;
//! a twisted sector carries `A*(Y)[t] / ∏_{ζ^{b_k} = 1} 𝐞_k`.
//!
//! The product is
//! `α e_ζ ⋆ β e_η = [a(t) b(t) C_{ζη}(t)] e_{ζη}` where `C_{ζη}` is the
//! product of `𝐞_a` over `a ∈ {−1, b_1, …, b_m}` with `ζ^a` or `η^a`
//! nontrivial and `arg ζ^a + arg η^a ≥ 1`. Representatives are taken in
//! `A*(Y, X)[t]`, i.e. pairs of a polynomial over the center and a class of
//! `A*(X)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::blowup::{BlowupError, BlowupInstance, PairElement};
use crate::graded::{Element, Graded, GradedError, GradedRing, Polynomial};
use crate::{Degree, Int, Rational};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum StringyError {
    #[error(transparent)]
    Blowup(#[from] BlowupError),
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error("sector {0} is empty")]
    EmptySector(SectorId),
    #[error("invalid sector ({r}, {c}): need r ≥ 1, 0 ≤ c < r and gcd(c, r) = 1")]
    InvalidSector { r: i64, c: i64 },
    #[error("internal consistency: the product landing in the untwisted sector has constant term {0}")]
    ConstantTerm(String),
    #[error("degree cap {cap} exceeds the truncation bound {d_max}")]
    CapTooLarge { cap: Degree, d_max: Degree },
}

/// Reduced fraction `c/r` with `0 ≤ c < r`, `gcd(c, r) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SectorId {
    r: i64,
    c: i64,
}

impl SectorId {
    pub const TRIVIAL: SectorId = SectorId { r: 1, c: 0 };

    pub fn new(r: i64, c: i64) -> Result<Self, StringyError> {
        if r < 1 || c < 0 || c >= r || c.gcd(&r) != 1 {
            return Err(StringyError::InvalidSector { r, c });
        }
        Ok(Self { r, c })
    }

    /// The sector whose argument is the fractional part of `x`.
    pub fn from_arg(x: Rational) -> Self {
        let f = x - x.floor();
        Self { r: *f.denom(), c: *f.numer() }
    }

    pub fn order(&self) -> i64 {
        self.r
    }

    pub fn numerator(&self) -> i64 {
        self.c
    }

    pub fn arg(&self) -> Rational {
        Rational::new(self.c, self.r)
    }

    pub fn is_trivial(&self) -> bool {
        self.r == 1
    }

    /// `ζ^a = 1` exactly when `r | a`.
    pub fn pow_is_trivial(&self, a: i64) -> bool {
        a.mod_floor(&self.r) == 0
    }

    /// Name of the basis symbol: `e_1` or `e_{c/r}`.
    pub fn symbol(&self) -> String {
        if self.is_trivial() {
            "e_1".into()
        } else {
            format!("e_{{{}/{}}}", self.c, self.r)
        }
    }
}

impl fmt::Display for SectorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.r, self.c)
    }
}

/// `arg ζ^a = ((a·c) mod r) / r`.
pub fn arg_pow(z: SectorId, a: i64) -> Rational {
    Rational::new((a * z.c).mod_floor(&z.r), z.r)
}

/// Product of sectors: arguments add modulo 1.
pub fn sector_mul(z: SectorId, h: SectorId) -> SectorId {
    SectorId::from_arg(z.arg() + h.arg())
}

/// The trivial sector followed by every `(r, c)` with `r > 1` dividing some
/// weight, ordered by `(r, c)`.
pub fn enumerate_sectors(weights: &[i64]) -> Vec<SectorId> {
    let mut orders = BTreeSet::new();
    for &b in weights {
        for r in 2..=b {
            if b % r == 0 {
                orders.insert(r);
            }
        }
    }
    let mut out = vec![SectorId::TRIVIAL];
    for r in orders {
        for c in 1..r {
            if c.gcd(&r) == 1 {
                out.push(SectorId { r, c });
            }
        }
    }
    out
}

/// `age(ζ) = arg ζ^{−1} + Σ_{ζ^{b_k} ≠ 1} r_k · arg ζ^{b_k}`.
pub fn age_for(z: SectorId, weights: &[i64], codims: &[usize]) -> Result<Rational, StringyError> {
    if z.is_trivial() {
        return Ok(Rational::zero());
    }
    if !weights.iter().any(|&b| z.pow_is_trivial(b)) {
        return Err(StringyError::EmptySector(z));
    }
    let mut age = arg_pow(z, -1);
    for (&b, &r) in weights.iter().zip(codims) {
        if !z.pow_is_trivial(b) {
            age += arg_pow(z, b) * Rational::from(r as i64);
        }
    }
    Ok(age)
}

/// The integers `a` contributing `𝐞_a` to `C_{ζη}`, in increasing order.
pub fn c_factors(z: SectorId, h: SectorId, weights: &[i64]) -> Vec<i64> {
    let mut cands: BTreeSet<i64> = weights.iter().copied().collect();
    cands.insert(-1);
    cands
        .into_iter()
        .filter(|&a| {
            (!z.pow_is_trivial(a) || !h.pow_is_trivial(a)) && arg_pow(z, a) + arg_pow(h, a) >= Rational::one()
        })
        .collect()
}

/// One sector with its age and ring.
#[derive(Clone, Debug)]
pub struct Sector {
    pub id: SectorId,
    pub age: Rational,
    /// `None` for the untwisted sector, which uses the blowup ring.
    ring: Option<Arc<GradedRing>>,
    /// `∏_{ζ^{b_k}=1} 𝐞_k` for twisted sectors.
    pub relation: Option<Polynomial>,
}

/// A finitely supported sum of sector classes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StringyClass {
    comps: BTreeMap<SectorId, Element>,
}

impl StringyClass {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(id: SectorId, x: Element) -> Self {
        let mut comps = BTreeMap::new();
        if !x.is_zero() {
            comps.insert(id, x);
        }
        Self { comps }
    }

    pub fn components(&self) -> &BTreeMap<SectorId, Element> {
        &self.comps
    }

    pub fn component(&self, id: SectorId) -> Option<&Element> {
        self.comps.get(&id)
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// The unique sector of a nonzero single-sector class.
    pub fn sector(&self) -> Option<SectorId> {
        (self.comps.len() == 1).then(|| *self.comps.keys().next().expect("one entry"))
    }
}

/// Result of [`StringyRing::stringy_degree`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StringyDegree {
    Zero,
    Homogeneous(Rational),
    Inhomogeneous,
}

/// A polynomial representative in `A*(Y, X)[t]`: a polynomial over the
/// center plus a class of `A*(X)` in the constant term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YXPoly {
    pub y: Polynomial,
    pub x: Polynomial,
}

/// A canonical generator of the stringy ring, with its degrees.
#[derive(Clone, Debug)]
pub struct StringyGenerator {
    pub class: StringyClass,
    pub sector: SectorId,
    /// Chow degree inside the sector ring.
    pub chow_degree: Degree,
    pub stringy_degree: Rational,
}

/// One cell of the multiplication table, indexing into the generator list.
#[derive(Clone, Debug)]
pub struct TableEntry {
    pub left: usize,
    pub right: usize,
    pub product: StringyClass,
}

/// The stringy Chow ring of a weighted blowup, truncated in degree.
#[derive(Clone, Debug)]
pub struct StringyRing {
    inst: Arc<BlowupInstance>,
    sectors: Vec<Sector>,
    index: HashMap<SectorId, usize>,
}

impl StringyRing {
    pub fn new(inst: Arc<BlowupInstance>) -> Result<Self, StringyError> {
        let weights = inst.center().weights();
        let codims: Vec<usize> = inst.center().ideals.iter().map(|k| k.codim).collect();
        let mut sectors = Vec::new();
        let mut cache: HashMap<Polynomial, Arc<GradedRing>> = HashMap::new();
        for id in enumerate_sectors(&weights) {
            let age = age_for(id, &weights, &codims)?;
            if id.is_trivial() {
                sectors.push(Sector { id, age, ring: None, relation: None });
                continue;
            }
            let rel = inst
                .center()
                .ideals
                .iter()
                .enumerate()
                .filter(|(_, k)| id.pow_is_trivial(k.weight))
                .fold(Polynomial::one(inst.yt_nvars()), |acc, (k, _)| &acc * &inst.ideal_e_poly(k));
            let ring = match cache.get(&rel) {
                Some(r) => r.clone(),
                None => {
                    let r = Arc::new(inst.quotient_ring(&rel)?);
                    cache.insert(rel.clone(), r.clone());
                    r
                }
            };
            sectors.push(Sector { id, age, ring: Some(ring), relation: Some(rel) });
        }
        let index = sectors.iter().enumerate().map(|(i, s)| (s.id, i)).collect();
        Ok(Self { inst, sectors, index })
    }

    pub fn instance(&self) -> &Arc<BlowupInstance> {
        &self.inst
    }

    pub fn d_max(&self) -> Degree {
        self.inst.d_max()
    }

    /// Sectors in canonical order, untwisted first.
    pub fn sectors(&self) -> &[Sector] {
        &self.sectors
    }

    /// Twisted sectors only.
    pub fn twisted(&self) -> impl Iterator<Item = &Sector> {
        self.sectors.iter().filter(|s| !s.id.is_trivial())
    }

    pub fn sector(&self, id: SectorId) -> Option<&Sector> {
        self.index.get(&id).map(|&i| &self.sectors[i])
    }

    pub fn age(&self, id: SectorId) -> Result<Rational, StringyError> {
        self.sector(id).map(|s| s.age).ok_or(StringyError::EmptySector(id))
    }

    /// Ring of a twisted sector.
    pub fn twisted_ring(&self, id: SectorId) -> Option<&Arc<GradedRing>> {
        self.sector(id).and_then(|s| s.ring.as_ref())
    }

    /// The graded group of any nonempty sector.
    pub fn sector_graded(&self, id: SectorId) -> Option<&dyn Graded> {
        let s = self.sector(id)?;
        Some(match &s.ring {
            None => self.inst.blowup_ring() as &dyn Graded,
            Some(r) => r.as_ref() as &dyn Graded,
        })
    }

    pub fn c_factors(&self, z: SectorId, h: SectorId) -> Vec<i64> {
        c_factors(z, h, &self.inst.center().weights())
    }

    /// `C_{ζη}` as a polynomial over the center (`1` if no factor qualifies).
    pub fn c_poly(&self, z: SectorId, h: SectorId) -> Polynomial {
        self.c_factors(z, h)
            .into_iter()
            .fold(Polynomial::one(self.inst.yt_nvars()), |acc, a| &acc * &self.inst.e_poly(a))
    }

    /// The fundamental class `e_ζ`.
    pub fn e(&self, id: SectorId) -> Result<StringyClass, StringyError> {
        let s = self.sector(id).ok_or(StringyError::EmptySector(id))?;
        let x = match &s.ring {
            None => self.inst.pair_unit(),
            Some(r) => r.unit(),
        };
        Ok(StringyClass::single(id, x))
    }

    /// `α·e_1` for a pair element `α`.
    pub fn untwisted(&self, x: PairElement) -> StringyClass {
        StringyClass::single(SectorId::TRIVIAL, x)
    }

    /// Class in a twisted sector from a polynomial over the center.
    pub fn twisted_class(&self, id: SectorId, p: &Polynomial) -> Result<StringyClass, StringyError> {
        let ring = self.twisted_ring(id).ok_or(StringyError::EmptySector(id))?;
        Ok(StringyClass::single(id, ring.from_poly(p)?))
    }

    pub fn representative(&self, id: SectorId, x: &Element) -> YXPoly {
        match self.twisted_ring(id) {
            None => {
                let (q, beta) = self.inst.pair_parts(x);
                YXPoly { y: q, x: beta }
            }
            Some(r) => YXPoly { y: r.to_poly(x), x: Polynomial::zero(self.inst.ax().nvars()) },
        }
    }

    /// Product in `A*(Y, X)[t]`.
    pub fn yx_mul(&self, a: &YXPoly, b: &YXPoly) -> YXPoly {
        let inst = &self.inst;
        let y = &(&(&a.y * &b.y) + &(&a.y * &inst.pull_poly(&b.x))) + &(&b.y * &inst.pull_poly(&a.x));
        YXPoly { y, x: &a.x * &b.x }
    }

    /// Reduces a representative into the ring of sector `θ`; `None` when the
    /// sector is empty.
    pub fn reduce_into(&self, theta: SectorId, p: &YXPoly) -> Result<Option<Element>, StringyError> {
        let Some(s) = self.sector(theta) else { return Ok(None) };
        match &s.ring {
            Some(r) => Ok(Some(r.from_poly(&(&p.y + &self.inst.pull_poly(&p.x)))?)),
            None => {
                let ti = self.inst.t_index();
                let mut parts = p.y.split_by_var(ti);
                let q0 = parts.remove(&0).unwrap_or_else(|| Polynomial::zero(self.inst.yt_nvars()));
                let q0_class = self.inst.exceptional_ring().from_poly(&q0)?;
                if !q0_class.is_zero() {
                    return Err(StringyError::ConstantTerm(q0.render(&self.inst.yt_names())));
                }
                // A constant term that vanishes in A*(Y) only contributes relations.
                let q = &p.y - &q0;
                let extra = self.inst.pair(&Polynomial::zero(self.inst.yt_nvars()), &p.x)?;
                let main = self.inst.pair(&q, &Polynomial::zero(self.inst.ax().nvars()))?;
                Ok(Some(self.inst.blowup_ring().add(&main, &extra)))
            }
        }
    }

    /// Product of two single-sector terms.
    pub fn star_terms(&self, z: SectorId, a: &Element, h: SectorId, b: &Element) -> Result<StringyClass, StringyError> {
        let theta = sector_mul(z, h);
        if self.sector(theta).is_none() {
            return Ok(StringyClass::zero());
        }
        let ra = self.representative(z, a);
        let rb = self.representative(h, b);
        let mut prod = self.yx_mul(&ra, &rb);
        let factors = self.c_factors(z, h);
        if !factors.is_empty() {
            let c = YXPoly { y: self.c_poly(z, h), x: Polynomial::zero(self.inst.ax().nvars()) };
            prod = self.yx_mul(&prod, &c);
        }
        if theta.is_trivial() && !factors.is_empty() {
            // a(t)b(t)C lies on the Y-side; its constant term must vanish
            let x_in_y = self.inst.pull_poly(&prod.x);
            prod = YXPoly { y: &prod.y + &x_in_y, x: Polynomial::zero(self.inst.ax().nvars()) };
        }
        let out = self.reduce_into(theta, &prod)?.unwrap_or_default();
        Ok(StringyClass::single(theta, out))
    }

    pub fn add(&self, x: &StringyClass, y: &StringyClass) -> StringyClass {
        let mut comps = x.comps.clone();
        for (id, b) in &y.comps {
            let g = self.sector_graded(*id).expect("nonempty sector");
            let sum = match comps.get(id) {
                Some(a) => g.add(a, b),
                None => b.clone(),
            };
            if sum.is_zero() {
                comps.remove(id);
            } else {
                comps.insert(*id, sum);
            }
        }
        StringyClass { comps }
    }

    pub fn scale(&self, k: &Int, x: &StringyClass) -> StringyClass {
        let mut out = StringyClass::zero();
        for (id, a) in &x.comps {
            let g = self.sector_graded(*id).expect("nonempty sector");
            out = self.add(&out, &StringyClass::single(*id, g.scale(k, a)));
        }
        out
    }

    pub fn sub(&self, x: &StringyClass, y: &StringyClass) -> StringyClass {
        self.add(x, &self.scale(&Int::from(-1), y))
    }

    pub fn star(&self, x: &StringyClass, y: &StringyClass) -> Result<StringyClass, StringyError> {
        let mut out = StringyClass::zero();
        for (z, a) in &x.comps {
            for (h, b) in &y.comps {
                out = self.add(&out, &self.star_terms(*z, a, *h, b)?);
            }
        }
        Ok(out)
    }

    pub fn stringy_degree(&self, x: &StringyClass) -> StringyDegree {
        let mut deg = None;
        for (id, a) in &x.comps {
            let age = self.sector(*id).expect("nonempty sector").age;
            for d in a.components().keys() {
                let s = *d + age;
                match deg {
                    None => deg = Some(s),
                    Some(s0) if s0 != s => return StringyDegree::Inhomogeneous,
                    _ => {}
                }
            }
        }
        deg.map_or(StringyDegree::Zero, StringyDegree::Homogeneous)
    }

    /// Canonical generators of every sector piece with stringy degree `≤ cap`,
    /// ordered by stringy degree, then sector, then position.
    pub fn canonical_generators(&self, cap: Rational) -> Vec<StringyGenerator> {
        let mut out = Vec::new();
        for s in &self.sectors {
            let g = self.sector_graded(s.id).expect("nonempty sector");
            for d in g.pieces().keys() {
                let sd = *d + s.age;
                if sd > cap {
                    continue;
                }
                for x in g.canonical_generators(*d) {
                    out.push(StringyGenerator {
                        class: StringyClass::single(s.id, x),
                        sector: s.id,
                        chow_degree: *d,
                        stringy_degree: sd,
                    });
                }
            }
        }
        out.sort_by(|a, b| a.stringy_degree.cmp(&b.stringy_degree).then(a.sector.cmp(&b.sector)));
        out
    }

    /// Products of all generator pairs whose stringy degrees sum to `≤ cap`.
    pub fn multiplication_table(&self, cap: Rational) -> Result<(Vec<StringyGenerator>, Vec<TableEntry>), StringyError> {
        if cap > self.d_max() {
            return Err(StringyError::CapTooLarge { cap, d_max: self.d_max() });
        }
        let gens = self.canonical_generators(cap);
        let mut table = Vec::new();
        for i in 0..gens.len() {
            for j in i..gens.len() {
                if gens[i].stringy_degree + gens[j].stringy_degree > cap {
                    continue;
                }
                let product = self.star(&gens[i].class, &gens[j].class)?;
                table.push(TableEntry { left: i, right: j, product });
            }
        }
        Ok((gens, table))
    }

    /// Restriction of a blowup class to the ring of sector `ζ`.
    pub fn restrict_to_sector(&self, id: SectorId, x: &PairElement) -> Result<Element, StringyError> {
        match self.twisted_ring(id) {
            None if self.sector(id).is_some() => Ok(x.clone()),
            None => Err(StringyError::EmptySector(id)),
            Some(r) => Ok(self.inst.restrict_to(r, x)?),
        }
    }

    pub fn render_element(&self, id: SectorId, x: &Element) -> String {
        match self.twisted_ring(id) {
            None => self.inst.render_pair(x),
            Some(r) => r.render(x),
        }
    }

    pub fn render(&self, x: &StringyClass) -> String {
        if x.is_zero() {
            return "0".into();
        }
        x.comps
            .iter()
            .map(|(id, a)| {
                let body = self.render_element(*id, a);
                if body == "1" {
                    id.symbol()
                } else {
                    format!("({}) {}", body, id.symbol())
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}
