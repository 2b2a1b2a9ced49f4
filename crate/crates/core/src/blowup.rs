//! Chow rings of a weighted blowup and of its exceptional divisor.
//!
//! Classes over the center live in polynomials in `t` with coefficients in
//! `A*(Y)`: the variables are the generators of `A*(Y)` followed by `t`.
//! The blowup ring is the ring of pairs `(q(t), β)` with `q` divisible by
//! `t` and `β ∈ A*(X)`, multiplied by
//! `(q₁q₂ + q₁·i*β₂ + q₂·i*β₁, β₁β₂)` and taken modulo
//! `((P(t) − P(0))·α, i_*α)` for `α ∈ A*(Y)`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::graded::{
    parse_polynomial, Element, Exponents, Graded, GradedError, GradedMorphism, GradedRing, Homogeneity, MorphismKind, Piece,
    Polynomial, RingPresentation,
};
use crate::zlin::{Lattice, Matrix};
use crate::{Degree, Int, IntMatrix};

/// Elements of the blowup ring are plain [`Element`]s of [`PairRing`].
pub type PairElement = Element;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BlowupError {
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error("generator name '{0}' is reserved")]
    ReservedName(String),
    #[error("generator name '{0}' is used by both A*(X) and A*(Y)")]
    SharedName(String),
    #[error("the center has no ideals")]
    NoCenter,
    #[error("ideal {ideal}: weight and codimension must be positive")]
    BadWeight { ideal: String },
    #[error("ideal {ideal}: expected {expected} Chern classes, got {got}")]
    ChernCount { ideal: String, expected: usize, got: usize },
    #[error("ideal {ideal}: Chern class c_{index} is not homogeneous of degree {index}")]
    ChernDegree { ideal: String, index: usize },
    #[error("ideal {ideal}: the class of V(J) is not homogeneous of degree {codim}")]
    ClassDegree { ideal: String, codim: usize },
    #[error("ideal {ideal}: top Chern class {chern} differs from the restriction {restricted} of [V(J)]")]
    SelfIntersection { ideal: String, chern: String, restricted: String },
    #[error("the class of Y is not homogeneous of degree {codim}")]
    YClassDegree { codim: usize },
    #[error("[Y] = {given} but i_*(1) = {pushed}")]
    FundamentalClass { given: String, pushed: String },
    #[error("pushforward shift {shift} differs from the codimension {codim} of Y")]
    ShiftMismatch { shift: Degree, codim: usize },
    #[error("pullback must map A*(X) to A*(Y) and pushforward A*(Y) to A*(X)")]
    MorphismMismatch,
    #[error("pullback must be a ring map and pushforward a module map")]
    MorphismKindMismatch,
    #[error("projection formula fails for the pair ({alpha}, {beta}): i_*(α·i*β) = {lhs}, i_*(α)·β = {rhs}")]
    ProjectionFormula { alpha: String, beta: String, lhs: String, rhs: String },
    #[error("self-intersection fails for {alpha}: i*i_*(α) = {lhs}, P(0)·α = {rhs}")]
    ExcessIntersection { alpha: String, lhs: String, rhs: String },
    #[error("not an element of the blowup ring: {0}")]
    NotAPair(String),
    #[error("expected {expected} pullback images, one per generator of A*(X), got {got}")]
    PullCount { expected: usize, got: usize },
    #[error("pushforward key `{0}` is not a monomial of A*(Y)")]
    PushKey(String),
}

/// One ideal `J_k` of the center.
#[derive(Clone, Debug)]
pub struct CenterIdeal {
    pub name: String,
    /// Weight `b_k`.
    pub weight: i64,
    /// Codimension `r_k` of `V(J_k)`.
    pub codim: usize,
    /// `c_1, …, c_{r_k}` of `(J_k/J_k²)^∨` in `A*(Y)`.
    pub chern: Vec<Element>,
    /// `[V(J_k)]` in `A^{r_k}(X)`.
    pub class: Element,
}

#[derive(Clone, Debug)]
pub struct CenterData {
    pub ideals: Vec<CenterIdeal>,
    /// `[Y]` in `A*(X)`.
    pub y_class: Element,
}

impl CenterData {
    pub fn codim(&self) -> usize {
        self.ideals.iter().map(|k| k.codim).sum()
    }

    pub fn weights(&self) -> Vec<i64> {
        self.ideals.iter().map(|k| k.weight).collect()
    }
}

/// Where each coordinate of a pair-ring piece comes from.
#[derive(Clone, Debug)]
struct PairLayout {
    /// `(n, m)`: the class `tⁿ·m`, `n ≥ 1`, `m` a monomial of `A*(Y)`.
    y_labels: Vec<(u32, Exponents)>,
    y_index: HashMap<(u32, Exponents), usize>,
    x_len: usize,
}

/// The Chow ring of the blowup as a graded group of pairs.
#[derive(Clone, Debug)]
pub struct PairRing {
    d_max: Degree,
    pieces: BTreeMap<Degree, Piece>,
    layouts: BTreeMap<Degree, PairLayout>,
}

impl Graded for PairRing {
    fn d_max(&self) -> Degree {
        self.d_max
    }

    fn pieces(&self) -> &BTreeMap<Degree, Piece> {
        &self.pieces
    }
}

/// Verdicts comparing surjectivity of `i*` and of `j*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicReport {
    pub i_star: BTreeMap<Degree, bool>,
    pub j_star: BTreeMap<Degree, bool>,
    /// Surjective in every degree `≤ d` agrees for both maps, for every `d`.
    pub cumulative_agree: bool,
    pub first_failure_i: Option<Degree>,
    pub first_failure_j: Option<Degree>,
}

impl ClassicReport {
    pub fn i_surjective(&self) -> bool {
        self.first_failure_i.is_none()
    }

    pub fn j_surjective(&self) -> bool {
        self.first_failure_j.is_none()
    }

    pub fn agree(&self) -> bool {
        self.cumulative_agree && self.i_surjective() == self.j_surjective()
    }
}

/// A validated weighted-blowup input with its derived Chow rings.
#[derive(Clone, Debug)]
pub struct BlowupInstance {
    ax: Arc<GradedRing>,
    ay: Arc<GradedRing>,
    pull: GradedMorphism,
    push: GradedMorphism,
    center: CenterData,
    d_max: Degree,
    denominator: i64,
    pull_images: Vec<Polynomial>,
    exceptional: Arc<GradedRing>,
    pair: PairRing,
}

fn integer_degrees(d_max: Degree) -> Vec<Degree> {
    (0..=d_max.floor().to_integer()).map(Degree::from).collect()
}

impl BlowupInstance {
    /// Validates the input data and builds `A*(𝒴)` and `A*(𝒳)`.
    pub fn new(pull: GradedMorphism, push: GradedMorphism, center: CenterData) -> Result<Self, BlowupError> {
        let ax = pull.source().clone();
        let ay = pull.target().clone();
        if !Arc::ptr_eq(push.source(), &ay) || !Arc::ptr_eq(push.target(), &ax) {
            return Err(BlowupError::MorphismMismatch);
        }
        let pull_images = match pull.kind() {
            MorphismKind::Ring { images } => images.clone(),
            MorphismKind::Module { .. } => return Err(BlowupError::MorphismKindMismatch),
        };
        if !matches!(push.kind(), MorphismKind::Module { .. }) {
            return Err(BlowupError::MorphismKindMismatch);
        }
        for n in ax.names().into_iter().chain(ay.names()) {
            if n == "t" {
                return Err(BlowupError::ReservedName(n.into()));
            }
        }
        for n in ax.names() {
            if ay.names().contains(&n) {
                return Err(BlowupError::SharedName(n.into()));
            }
        }
        if center.ideals.is_empty() {
            return Err(BlowupError::NoCenter);
        }
        let d_max = ax.d_max().min(ay.d_max());
        let denominator = ax.denominator();
        let codim = center.codim();
        if push.shift() != Degree::from(codim as i64) {
            return Err(BlowupError::ShiftMismatch { shift: push.shift(), codim });
        }

        for k in &center.ideals {
            if k.weight <= 0 || k.codim == 0 {
                return Err(BlowupError::BadWeight { ideal: k.name.clone() });
            }
            if k.chern.len() != k.codim {
                return Err(BlowupError::ChernCount { ideal: k.name.clone(), expected: k.codim, got: k.chern.len() });
            }
            for (j, c) in k.chern.iter().enumerate() {
                if !c.is_zero() && c.degree() != Some(Degree::from(j as i64 + 1)) {
                    return Err(BlowupError::ChernDegree { ideal: k.name.clone(), index: j + 1 });
                }
            }
            if !k.class.is_zero() && k.class.degree() != Some(Degree::from(k.codim as i64)) {
                return Err(BlowupError::ClassDegree { ideal: k.name.clone(), codim: k.codim });
            }
        }
        if !center.y_class.is_zero() && center.y_class.degree() != Some(Degree::from(codim as i64)) {
            return Err(BlowupError::YClassDegree { codim });
        }

        // Self-intersection consistency c_{r_k} = i*[V(J_k)].
        for k in &center.ideals {
            if Degree::from(k.codim as i64) > d_max {
                continue;
            }
            let restricted = pull.apply(&k.class)?;
            let top = &k.chern[k.codim - 1];
            if !ay.equal(&restricted, top) {
                return Err(BlowupError::SelfIntersection {
                    ideal: k.name.clone(),
                    chern: ay.render(top),
                    restricted: ay.render(&restricted),
                });
            }
        }

        if Degree::from(codim as i64) <= d_max {
            let pushed = push.apply(&ay.unit())?;
            if !ax.equal(&pushed, &center.y_class) {
                return Err(BlowupError::FundamentalClass {
                    given: ax.render(&center.y_class),
                    pushed: ax.render(&pushed),
                });
            }
        }

        // Projection formula on all monomial pairs within bounds.
        let cdeg = Degree::from(codim as i64);
        for e in ay.pieces().keys() {
            for alpha in ay.monomials(*e) {
                let a = ay.from_poly(&Polynomial::monomial(alpha.clone(), Int::one()))?;
                for f in ax.pieces().keys() {
                    if *e + *f + cdeg > d_max {
                        continue;
                    }
                    for beta in ax.monomials(*f) {
                        let b = ax.from_poly(&Polynomial::monomial(beta.clone(), Int::one()))?;
                        let lhs = push.apply(&ay.mul(&a, &pull.apply(&b)?)?)?;
                        let rhs = ax.mul(&push.apply(&a)?, &b)?;
                        if !ax.equal(&lhs, &rhs) {
                            return Err(BlowupError::ProjectionFormula {
                                alpha: ay.render(&a),
                                beta: ax.render(&b),
                                lhs: ax.render(&lhs),
                                rhs: ax.render(&rhs),
                            });
                        }
                    }
                }
            }
        }

        let mut inst = Self {
            ax: ax.clone(),
            ay: ay.clone(),
            pull,
            push,
            center,
            d_max,
            denominator,
            pull_images,
            exceptional: Arc::new(GradedRing::build(RingPresentation::new(vec![], vec![], Degree::zero(), 1))?),
            pair: PairRing { d_max, pieces: BTreeMap::new(), layouts: BTreeMap::new() },
        };

        // i*i_*α = P(0)·α, which makes the pair relations an ideal.
        let p0 = inst.total_p().split_by_var(inst.t_index()).remove(&0).unwrap_or_else(|| inst.yt_zero());
        let p0_y = inst.drop_t(&p0);
        for e in ay.pieces().keys() {
            if *e + cdeg > d_max {
                continue;
            }
            for alpha in ay.monomials(*e) {
                let a = ay.from_poly(&Polynomial::monomial(alpha.clone(), Int::one()))?;
                let lhs = inst.pull.apply(&inst.push.apply(&a)?)?;
                let rhs = ay.from_poly(&(&p0_y * &ay.to_poly(&a)))?;
                if !ay.equal(&lhs, &rhs) {
                    return Err(BlowupError::ExcessIntersection {
                        alpha: ay.render(&a),
                        lhs: ay.render(&lhs),
                        rhs: ay.render(&rhs),
                    });
                }
            }
        }

        inst.exceptional = Arc::new(inst.quotient_ring(&inst.total_p())?);
        inst.pair = inst.build_pair_ring()?;
        Ok(inst)
    }

    pub fn ax(&self) -> &Arc<GradedRing> {
        &self.ax
    }

    pub fn ay(&self) -> &Arc<GradedRing> {
        &self.ay
    }

    pub fn pull_i(&self) -> &GradedMorphism {
        &self.pull
    }

    pub fn push_i(&self) -> &GradedMorphism {
        &self.push
    }

    pub fn center(&self) -> &CenterData {
        &self.center
    }

    pub fn d_max(&self) -> Degree {
        self.d_max
    }

    pub fn denominator(&self) -> i64 {
        self.denominator
    }

    pub fn codim(&self) -> usize {
        self.center.codim()
    }

    /// Number of variables of polynomials over the center (`A*(Y)` gens and `t`).
    pub fn yt_nvars(&self) -> usize {
        self.ay.nvars() + 1
    }

    pub fn t_index(&self) -> usize {
        self.ay.nvars()
    }

    pub fn yt_names(&self) -> Vec<&str> {
        let mut n = self.ay.names();
        n.push("t");
        n
    }

    fn yt_zero(&self) -> Polynomial {
        Polynomial::zero(self.yt_nvars())
    }

    pub fn t_poly(&self) -> Polynomial {
        Polynomial::var(self.yt_nvars(), self.t_index())
    }

    /// A class of `A*(Y)` as a `t`-free polynomial over the center.
    pub fn y_poly(&self, x: &Element) -> Polynomial {
        let map: Vec<usize> = (0..self.ay.nvars()).collect();
        self.ay.to_poly(x).embed(self.yt_nvars(), &map)
    }

    /// Drops the `t` variable from a `t`-free polynomial over the center.
    pub fn drop_t(&self, p: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.ay.nvars());
        for (e, c) in p.terms() {
            debug_assert_eq!(e[self.t_index()], 0);
            out.add_term(e[..self.ay.nvars()].to_vec(), c.clone());
        }
        out
    }

    /// `i*` on polynomials: substitutes generator images, landing over the center.
    pub fn pull_poly(&self, beta: &Polynomial) -> Polynomial {
        let map: Vec<usize> = (0..self.ay.nvars()).collect();
        let imgs: Vec<Polynomial> = self.pull_images.iter().map(|p| p.embed(self.yt_nvars(), &map)).collect();
        if imgs.is_empty() {
            let c = beta.constant_term();
            return Polynomial::constant(self.yt_nvars(), c);
        }
        beta.substitute(&imgs)
    }

    /// `𝐞_k = Σ_j b_k^j t^j c_{r_k − j}` for the `k`-th ideal.
    pub fn ideal_e_poly(&self, k: usize) -> Polynomial {
        let ideal = &self.center.ideals[k];
        let r = ideal.codim;
        let b = Int::from(ideal.weight);
        let t = self.t_poly();
        let mut out = self.yt_zero();
        for j in 0..=r {
            let c = if j == r {
                Polynomial::one(self.yt_nvars())
            } else {
                self.y_poly(&ideal.chern[r - j - 1])
            };
            let coeff = num_traits::pow(b.clone(), j);
            out = &out + &(&t.pow(j as u32) * &c).scale(&coeff);
        }
        out
    }

    /// `𝐞_a`: the product over ideals of weight `a`, `−t` for `a = −1`, and
    /// `1` otherwise.
    pub fn e_poly(&self, a: i64) -> Polynomial {
        if a == -1 {
            return -&self.t_poly();
        }
        let mut out = Polynomial::one(self.yt_nvars());
        for (k, ideal) in self.center.ideals.iter().enumerate() {
            if ideal.weight == a {
                out = &out * &self.ideal_e_poly(k);
            }
        }
        out
    }

    /// `P(t) = ∏_k 𝐞_k`.
    pub fn total_p(&self) -> Polynomial {
        (0..self.center.ideals.len()).fold(Polynomial::one(self.yt_nvars()), |acc, k| &acc * &self.ideal_e_poly(k))
    }

    /// `A*(Y)[t] / (rel)`, truncated at the instance bound.
    pub fn quotient_ring(&self, rel: &Polynomial) -> Result<GradedRing, GradedError> {
        let ap = self.ay.presentation();
        let mut gens = ap.generators.clone();
        gens.push(("t".into(), Degree::one()));
        let map: Vec<usize> = (0..self.ay.nvars()).collect();
        let mut rels: Vec<Polynomial> = ap.relations.iter().map(|r| r.embed(self.yt_nvars(), &map)).collect();
        rels.push(rel.clone());
        GradedRing::build(RingPresentation::new(gens, rels, self.d_max, self.denominator))
    }

    /// `A*(𝒴) = A*(Y)[t] / P(t)`.
    pub fn exceptional_ring(&self) -> &Arc<GradedRing> {
        &self.exceptional
    }

    /// `A*(𝒳)` as the ring of pairs.
    pub fn blowup_ring(&self) -> &PairRing {
        &self.pair
    }

    fn y_side_coords(&self, layout: &PairLayout, q: &Polynomial) -> Result<Vec<Int>, BlowupError> {
        let ti = self.t_index();
        let mut v = vec![Int::zero(); layout.y_labels.len()];
        for (e, c) in q.terms() {
            let n = e[ti];
            if n == 0 {
                return Err(BlowupError::NotAPair(format!(
                    "the t-part {} has a nonzero constant term",
                    q.render(&self.yt_names())
                )));
            }
            let m = e[..ti].to_vec();
            let i = layout.y_index.get(&(n, m)).ok_or_else(|| {
                BlowupError::Graded(GradedError::DegreeOverflow {
                    degree: Degree::from(n as i64) + self.ay.monomial_degree(&e[..ti]),
                    d_max: self.d_max,
                })
            })?;
            v[*i] += c;
        }
        Ok(v)
    }

    fn build_pair_ring(&self) -> Result<PairRing, BlowupError> {
        let ti = self.t_index();
        let cdeg = Degree::from(self.codim() as i64);
        let p = self.total_p();
        let p_minus_p0 = {
            let mut parts = p.split_by_var(ti);
            parts.remove(&0);
            parts.into_iter().fold(self.yt_zero(), |acc, (k, c)| {
                let mut e = vec![0; self.yt_nvars()];
                e[ti] = k;
                &acc + &c.shift(&e)
            })
        };
        let mut pieces = BTreeMap::new();
        let mut layouts = BTreeMap::new();
        for d in integer_degrees(self.d_max) {
            let di = d.to_integer();
            let mut y_labels = Vec::new();
            for n in 1..=di {
                for m in self.ay.monomials(d - Degree::from(n)) {
                    y_labels.push((n as u32, m.clone()));
                }
            }
            let y_index: HashMap<_, _> = y_labels.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
            let x_mons = self.ax.monomials(d);
            let layout = PairLayout { y_labels, y_index, x_len: x_mons.len() };
            let ny = layout.y_labels.len();
            let dim = ny + layout.x_len;
            if dim == 0 {
                continue;
            }
            let mut rows: Vec<Vec<Int>> = Vec::new();
            let embed = |yv: Vec<Int>, xv: Option<&[Int]>| -> Vec<Int> {
                let mut row = yv;
                match xv {
                    Some(x) => row.extend_from_slice(x),
                    None => row.extend(std::iter::repeat_n(Int::zero(), layout.x_len)),
                }
                row
            };
            // Relations of A*(Y), multiplied by tⁿ.
            for n in 1..=di {
                if let Some(yp) = self.ay.piece(d - Degree::from(n)) {
                    let mons = self.ay.monomials(d - Degree::from(n));
                    for r in yp.lattice.basis().row_vecs() {
                        let mut v = vec![Int::zero(); ny];
                        for (m, c) in mons.iter().zip(r) {
                            v[layout.y_index[&(n as u32, m.clone())]] += c;
                        }
                        rows.push(embed(v, None));
                    }
                }
            }
            // Relations of A*(X).
            if let Some(xp) = self.ax.piece(d) {
                for r in xp.lattice.basis().row_vecs() {
                    rows.push(embed(vec![Int::zero(); ny], Some(&r)));
                }
            }
            // ((P − P(0))·γ, i_*γ).
            let e = d - cdeg;
            if e >= Degree::zero() {
                let push_m = self.push.matrix_in_degree(e);
                for (gi, g) in self.ay.monomials(e).iter().enumerate() {
                    let gp = Polynomial::monomial(g.iter().copied().chain([0]).collect(), Int::one());
                    let yv = self.y_side_coords(&layout, &(&p_minus_p0 * &gp))?;
                    let xv: Vec<Int> = match push_m {
                        Some(a) if a.rows() > 0 => a.column(gi),
                        _ => vec![Int::zero(); layout.x_len],
                    };
                    rows.push(embed(yv, Some(&xv)));
                }
            }
            // (tⁿ·γ·P, 0), n ≥ 1: the ideal generated by the relations above.
            for n in 1..=di {
                let e = d - cdeg - Degree::from(n);
                if e < Degree::zero() {
                    break;
                }
                for g in self.ay.monomials(e) {
                    let mut ge: Exponents = g.clone();
                    ge.push(n as u32);
                    let yv = self.y_side_coords(&layout, &p.shift(&ge))?;
                    rows.push(embed(yv, None));
                }
            }
            let names = self.yt_names();
            let xnames = self.ax.names();
            let mut labels: Vec<String> = layout
                .y_labels
                .iter()
                .map(|(n, m)| {
                    let mut e = m.clone();
                    e.push(*n);
                    Polynomial::monomial(e, Int::one()).render(&names)
                })
                .collect();
            labels.extend(x_mons.iter().map(|m| Polynomial::monomial(m.clone(), Int::one()).render(&xnames)));
            pieces.insert(d, Piece::new(d, labels, rows));
            layouts.insert(d, layout);
        }
        Ok(PairRing { d_max: self.d_max.floor(), pieces, layouts })
    }

    /// The pair `(q, β)`; `q` is over the center, `β` over `A*(X)`.
    pub fn pair(&self, q: &Polynomial, beta: &Polynomial) -> Result<PairElement, BlowupError> {
        let ti = self.t_index();
        let mut comps: BTreeMap<Degree, Vec<Int>> = BTreeMap::new();
        let mut by_degree: BTreeMap<Degree, Polynomial> = BTreeMap::new();
        for (e, c) in q.terms() {
            let d = Degree::from(e[ti] as i64) + self.ay.monomial_degree(&e[..ti]);
            by_degree.entry(d).or_insert_with(|| self.yt_zero()).add_term(e.clone(), c.clone());
        }
        for (d, qd) in &by_degree {
            let layout = self.pair.layouts.get(d).ok_or(GradedError::DegreeOverflow { degree: *d, d_max: self.d_max })?;
            let mut v = self.y_side_coords(layout, qd)?;
            v.extend(std::iter::repeat_n(Int::zero(), layout.x_len));
            comps.insert(*d, v);
        }
        let bx = self.ax.from_poly(beta)?;
        for (d, xv) in bx.components() {
            let layout = self.pair.layouts.get(d).ok_or(GradedError::DegreeOverflow { degree: *d, d_max: self.d_max })?;
            let ny = layout.y_labels.len();
            let v = comps.entry(*d).or_insert_with(|| vec![Int::zero(); ny + layout.x_len]);
            for (a, b) in v[ny..].iter_mut().zip(xv) {
                *a += b;
            }
        }
        Ok(self.pair.reduce(&Element::from_reduced(comps)))
    }

    /// Representative `(q, β)` of a pair element.
    pub fn pair_parts(&self, x: &PairElement) -> (Polynomial, Polynomial) {
        let mut q = self.yt_zero();
        let mut beta = Polynomial::zero(self.ax.nvars());
        for (d, v) in x.components() {
            let layout = &self.pair.layouts[d];
            let ny = layout.y_labels.len();
            for ((n, m), c) in layout.y_labels.iter().zip(&v[..ny]) {
                let mut e = m.clone();
                e.push(*n);
                q.add_term(e, c.clone());
            }
            for (m, c) in self.ax.monomials(*d).iter().zip(&v[ny..]) {
                beta.add_term(m.clone(), c.clone());
            }
        }
        (q, beta)
    }

    pub fn pair_unit(&self) -> PairElement {
        self.pull_f(&self.ax.unit()).expect("unit is within bounds")
    }

    pub fn pair_mul(&self, x: &PairElement, y: &PairElement) -> Result<PairElement, BlowupError> {
        let (q1, b1) = self.pair_parts(x);
        let (q2, b2) = self.pair_parts(y);
        let q = &(&(&q1 * &q2) + &(&q1 * &self.pull_poly(&b2))) + &(&q2 * &self.pull_poly(&b1));
        self.pair(&q, &(&b1 * &b2))
    }

    /// `j*`: `(q, β) ↦ [q + i*β]` in `A*(𝒴)`.
    pub fn restrict_j(&self, x: &PairElement) -> Result<Element, GradedError> {
        self.restrict_to(&self.exceptional, x)
    }

    /// `(q, β) ↦ [q + i*β]` in any quotient of `A*(Y)[t]`.
    pub fn restrict_to(&self, ring: &GradedRing, x: &PairElement) -> Result<Element, GradedError> {
        let (q, b) = self.pair_parts(x);
        ring.from_poly(&(&q + &self.pull_poly(&b)))
    }

    /// `j_*`: `[p(t)] ↦ (−t·p(t), 0)`.
    pub fn push_j(&self, y: &Element) -> Result<PairElement, BlowupError> {
        let p = self.exceptional.to_poly(y);
        self.pair(&(&-&self.t_poly() * &p), &Polynomial::zero(self.ax.nvars()))
    }

    /// `f*`: `β ↦ (0, β)`.
    pub fn pull_f(&self, beta: &Element) -> Result<PairElement, BlowupError> {
        self.pair(&self.yt_zero(), &self.ax.to_poly(beta))
    }

    /// Polynomials `q + i*β` of the spanning pairs of degree `d`, in order.
    pub fn pair_label_polys(&self, d: Degree) -> Vec<Polynomial> {
        let Some(layout) = self.pair.layouts.get(&d) else { return Vec::new() };
        let mut out: Vec<Polynomial> = layout
            .y_labels
            .iter()
            .map(|(n, m)| {
                let mut e = m.clone();
                e.push(*n);
                Polynomial::monomial(e, Int::one())
            })
            .collect();
        for m in self.ax.monomials(d) {
            out.push(self.pull_poly(&Polynomial::monomial(m.clone(), Int::one())));
        }
        out
    }

    /// Matrix of `(q, β) ↦ [q + i*β]` from pair degree `d` into `ring`.
    pub fn restriction_matrix(&self, ring: &GradedRing, d: Degree) -> Option<IntMatrix> {
        let tp = ring.piece(d)?;
        let polys = self.pair_label_polys(d);
        let cols: Vec<Vec<Int>> = polys
            .iter()
            .map(|p| {
                let x = ring.from_poly(p).expect("same degree as the target piece");
                x.component(d).cloned().unwrap_or_else(|| vec![Int::zero(); tp.dim()])
            })
            .collect();
        Some(Matrix::from_columns(&cols, tp.dim()))
    }

    /// Image of restriction plus the relations of `ring`, in degree `d`.
    pub fn restriction_image(&self, ring: &GradedRing, d: Degree) -> Option<Lattice<Int>> {
        let tp = ring.piece(d)?;
        let mut gens = tp.lattice.basis().row_vecs();
        if let Some(m) = self.restriction_matrix(ring, d) {
            gens.extend(m.column_vecs());
        }
        Some(Lattice::new(tp.dim(), gens))
    }

    /// Surjectivity of `i*` and `j*`, degree by degree.
    pub fn classic_equivalence_report(&self) -> ClassicReport {
        let i_star = self.pull.is_surjective();
        let j_star: BTreeMap<Degree, bool> = self
            .exceptional
            .pieces()
            .keys()
            .map(|d| (*d, self.restriction_image(&self.exceptional, *d).is_none_or(|l| l.is_full())))
            .collect();
        let first = |m: &BTreeMap<Degree, bool>| m.iter().find(|(_, ok)| !**ok).map(|(d, _)| *d);
        let first_failure_i = first(&i_star);
        let first_failure_j = first(&j_star);
        let cumulative_agree = integer_degrees(self.d_max).iter().all(|d| {
            let ci = first_failure_i.is_none_or(|f| f > *d);
            let cj = first_failure_j.is_none_or(|f| f > *d);
            ci == cj
        });
        ClassicReport { i_star, j_star, cumulative_agree, first_failure_i, first_failure_j }
    }

    /// Renders a pair as `q + β`.
    pub fn render_pair(&self, x: &PairElement) -> String {
        let (q, b) = self.pair_parts(&self.pair.display_form(x));
        match (q.is_zero(), b.is_zero()) {
            (true, true) => "0".into(),
            (false, true) => q.render(&self.yt_names()),
            (true, false) => b.render(&self.ax.names()),
            (false, false) => {
                let bs = b.render(&self.ax.names());
                match bs.strip_prefix('-') {
                    Some(rest) => format!("{} - {}", q.render(&self.yt_names()), rest),
                    None => format!("{} + {}", q.render(&self.yt_names()), bs),
                }
            }
        }
    }

    /// Whether a polynomial is homogeneous over the center.
    pub fn yt_homogeneity(&self, p: &Polynomial) -> Homogeneity {
        let mut degs = self.ay.presentation().degrees();
        degs.push(Degree::one());
        p.homogeneity(&degs)
    }
}

/// A ring given by generator names, degrees and relation strings.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RingData {
    pub generators: Vec<(String, Degree)>,
    pub relations: Vec<String>,
}

/// One center ideal as strings over the generators of `A*(Y)` and `A*(X)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealData {
    pub name: String,
    pub weight: i64,
    pub codim: usize,
    pub chern: Vec<String>,
    pub class: String,
}

/// Textual description of an instance, as read from an instance file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceData {
    pub x: RingData,
    pub y: RingData,
    /// Image in `A*(Y)` of each generator of `A*(X)`.
    pub pull: Vec<String>,
    /// `i_*` on spanning monomials of `A*(Y)`; unlisted monomials push to 0.
    pub push: Vec<(String, String)>,
    pub ideals: Vec<IdealData>,
    pub y_class: String,
    pub d_max: Degree,
    pub denominator: i64,
}

fn parse_in(src: &str, names: &[&str]) -> Result<Polynomial, GradedError> {
    parse_polynomial(src, names).map_err(|error| GradedError::Parse { source_text: src.to_string(), error })
}

/// Parses and reduces, discarding terms above the truncation bound.
fn parse_truncated(ring: &GradedRing, src: &str) -> Result<Element, GradedError> {
    let p = parse_in(src, &ring.names())?;
    let degs = ring.presentation().degrees();
    let mut kept = Polynomial::zero(ring.nvars());
    for (e, c) in p.terms() {
        if Polynomial::weighted_degree(e, &degs) <= ring.d_max() {
            kept.add_term(e.clone(), c.clone());
        }
    }
    ring.from_poly(&kept)
}

impl InstanceData {
    pub fn build(&self) -> Result<BlowupInstance, BlowupError> {
        let ring = |r: &RingData| -> Result<Arc<GradedRing>, GradedError> {
            let gens: Vec<(&str, Degree)> = r.generators.iter().map(|(n, d)| (n.as_str(), *d)).collect();
            let rels: Vec<&str> = r.relations.iter().map(String::as_str).collect();
            Ok(Arc::new(GradedRing::build(RingPresentation::parse(&gens, &rels, self.d_max, self.denominator)?)?))
        };
        let ax = ring(&self.x)?;
        let ay = ring(&self.y)?;
        let ynames = ay.names();
        if self.pull.len() != ax.nvars() {
            return Err(BlowupError::PullCount { expected: ax.nvars(), got: self.pull.len() });
        }
        let images = self.pull.iter().map(|s| parse_in(s, &ynames)).collect::<Result<Vec<_>, _>>()?;
        let pull = GradedMorphism::ring_map("i*", ax.clone(), ay.clone(), images)?;

        let mut push_images = BTreeMap::new();
        for (key, img) in &self.push {
            let k = parse_in(key, &ynames)?;
            let mut terms = k.terms();
            let exps = match (terms.next(), terms.next()) {
                (Some((e, c)), None) if c.is_one() => e.clone(),
                _ => return Err(BlowupError::PushKey(key.clone())),
            };
            push_images.insert(exps, parse_in(img, &ax.names())?);
        }
        let codim: usize = self.ideals.iter().map(|k| k.codim).sum();
        let push = GradedMorphism::module_map("i_*", ay.clone(), ax.clone(), Degree::from(codim as i64), push_images)?;

        let mut ideals = Vec::new();
        for k in &self.ideals {
            ideals.push(CenterIdeal {
                name: k.name.clone(),
                weight: k.weight,
                codim: k.codim,
                chern: k.chern.iter().map(|c| parse_truncated(&ay, c)).collect::<Result<_, _>>()?,
                class: parse_truncated(&ax, &k.class)?,
            });
        }
        let y_class = parse_truncated(&ax, &self.y_class)?;
        BlowupInstance::new(pull, push, CenterData { ideals, y_class })
    }
}
