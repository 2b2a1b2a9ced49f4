//! The ambient subring and the finite-generation presentation.
//!
//! A class of a twisted sector is ambient when it is the restriction of a
//! class of `A*(𝒳)`. The ambient classes form the algebra
//! `A*(𝒳)[e_ζ] / (e_ζe_η − C_{ζη}e_{ζη}, ker(A*(𝒳) → A*(I_μ(ζ)))·e_ζ)`.
//! When `i*` is surjective the whole stringy ring is generated by `t` and
//! the `e_ζ` over `A*(X)`, and [`theorem_presentation`] writes down the
//! relations; [`verify_presentation`] checks the result degree by degree
//! against the directly computed stringy ring.

use std::collections::{BTreeMap, HashMap};

use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blowup::{BlowupError, BlowupInstance, PairElement};
use crate::graded::{degree_grid, Element, Exponents, Graded, GradedError, Piece, Polynomial};
use crate::stringy::{sector_mul, SectorId, StringyClass, StringyError, StringyRing};
use crate::zlin::{kernel_basis, AbGroupPresentation, Lattice, Matrix};
use crate::{Degree, Int, Rational};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PresentationError {
    #[error(transparent)]
    Stringy(#[from] StringyError),
    #[error(transparent)]
    Blowup(#[from] BlowupError),
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error("i* not surjective in degree {degree}")]
    NotSurjective { degree: Degree },
    #[error("no integral lift of {class} (degree {degree}) for {context}")]
    NoLift { context: String, class: String, degree: Degree },
    #[error("internal consistency: {0}")]
    Internal(String),
}

fn sector_piece(ring: &StringyRing, id: SectorId, d: Degree) -> Option<&Piece> {
    ring.sector_graded(id)?.piece(d)
}

/// First standard basis vector outside the lattice, by label.
fn missing_label(piece: &Piece, lat: &Lattice<Int>) -> Option<String> {
    (0..piece.dim()).find_map(|i| {
        let mut v = vec![Int::zero(); piece.dim()];
        v[i] = Int::one();
        (!lat.contains(&v)).then(|| piece.labels[i].clone())
    })
}

fn full_lattice(n: usize) -> Lattice<Int> {
    Lattice::new(n, Matrix::<Int>::identity(n).row_vecs())
}

/// Image of restriction into one sector, in one Chow degree.
#[derive(Clone, Debug)]
pub struct AmbientDegree {
    pub degree: Degree,
    pub stringy_degree: Rational,
    /// Image plus the relations of the sector piece.
    pub image: Lattice<Int>,
    /// Sector piece modulo the image.
    pub cokernel: AbGroupPresentation<Int>,
    /// A spanning label of the piece outside the image.
    pub witness: Option<String>,
}

impl AmbientDegree {
    pub fn is_full(&self) -> bool {
        self.image.is_full()
    }
}

#[derive(Clone, Debug)]
pub struct AmbientImage {
    pub sector: SectorId,
    pub degrees: Vec<AmbientDegree>,
}

impl AmbientImage {
    pub fn is_full(&self) -> bool {
        self.degrees.iter().all(AmbientDegree::is_full)
    }

    pub fn first_gap(&self) -> Option<&AmbientDegree> {
        self.degrees.iter().find(|d| !d.is_full())
    }
}

/// Image of `A*(𝒳) → A*(I_μ(ζ))` in each degree of stringy degree `≤ d_max`.
pub fn ambient_image(ring: &StringyRing, id: SectorId) -> Result<AmbientImage, PresentationError> {
    let sector = ring.sector(id).ok_or(StringyError::EmptySector(id))?;
    let g = ring.sector_graded(id).expect("nonempty sector");
    let inst = ring.instance();
    let mut degrees = Vec::new();
    for (d, piece) in g.pieces() {
        let sd = *d + sector.age;
        if sd > ring.d_max() {
            continue;
        }
        let image = match ring.twisted_ring(id) {
            None => full_lattice(piece.dim()),
            Some(tr) => inst.restriction_image(tr, *d).expect("degree present"),
        };
        let witness = missing_label(piece, &image);
        degrees.push(AmbientDegree { degree: *d, stringy_degree: sd, cokernel: image.quotient(), image, witness });
    }
    Ok(AmbientImage { sector: id, degrees })
}

/// `e_ζ e_η = C_{ζη} e_{ζη}` with `C_{ζη}` lifted to `A*(𝒳)`.
#[derive(Clone, Debug)]
pub struct ProductRelation {
    pub left: SectorId,
    pub right: SectorId,
    /// `None` when the target sector is empty.
    pub target: Option<SectorId>,
    pub factors: Vec<i64>,
    pub c: PairElement,
}

/// `α·e_ζ = 0` for `α` in the kernel of restriction to the sector.
#[derive(Clone, Debug)]
pub struct KernelRelation {
    pub sector: SectorId,
    pub degree: Degree,
    pub alpha: PairElement,
}

#[derive(Clone, Debug)]
pub struct AmbientPresentation {
    /// Twisted sectors with their ages.
    pub symbols: Vec<(SectorId, Rational)>,
    pub products: Vec<ProductRelation>,
    pub kernels: Vec<KernelRelation>,
}

/// `𝐞_a` as a class of `A*(𝒳)`: `𝐞_{−1} = −t` and
/// `𝐞_k = (𝐞_k − c_{r_k}, [V(J_k)])`.
pub fn lift_e_class(inst: &BlowupInstance, a: i64) -> Result<PairElement, BlowupError> {
    let zero_x = Polynomial::zero(inst.ax().nvars());
    if a == -1 {
        return inst.pair(&-&inst.t_poly(), &zero_x);
    }
    let mut out = inst.pair_unit();
    for (k, ideal) in inst.center().ideals.iter().enumerate() {
        if ideal.weight != a {
            continue;
        }
        let top = inst.y_poly(&ideal.chern[ideal.codim - 1]);
        let q = &inst.ideal_e_poly(k) - &top;
        let lifted = inst.pair(&q, &inst.ax().to_poly(&ideal.class))?;
        out = inst.pair_mul(&out, &lifted)?;
    }
    Ok(out)
}

/// `C_{ζη}` as a class of `A*(𝒳)`.
pub fn lift_c(ring: &StringyRing, z: SectorId, h: SectorId) -> Result<PairElement, BlowupError> {
    let inst = ring.instance();
    let mut out = inst.pair_unit();
    for a in ring.c_factors(z, h) {
        out = inst.pair_mul(&out, &lift_e_class(inst, a)?)?;
    }
    Ok(out)
}

/// Vectors `v` with `M v` in the lattice, reduced modulo `source` and
/// returned as an echelon basis of the kernel modulo `source`.
fn relative_kernel(m: &Matrix<Int>, target: &Lattice<Int>, source: &Lattice<Int>) -> Vec<Vec<Int>> {
    let n = m.cols();
    let b = Matrix::from_columns(&target.basis().row_vecs(), m.rows());
    let k = kernel_basis(&m.hstack(&b));
    let mut gens: Vec<Vec<Int>> = k.column_vecs().into_iter().map(|c| c[..n].to_vec()).collect();
    gens.extend(source.basis().row_vecs());
    let lat = Lattice::new(n, gens);
    let mut out = Vec::new();
    for mut v in lat.basis().row_vecs() {
        source.reduce(&mut v);
        if v.iter().any(|c| !c.is_zero()) && !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

pub fn ambient_presentation(ring: &StringyRing) -> Result<AmbientPresentation, PresentationError> {
    let inst = ring.instance();
    let pr = inst.blowup_ring();
    let twisted: Vec<_> = ring.twisted().map(|s| (s.id, s.age)).collect();
    let mut products = Vec::new();
    for (i, &(z, az)) in twisted.iter().enumerate() {
        for &(h, ah) in &twisted[i..] {
            if az + ah > ring.d_max() {
                continue;
            }
            let theta = sector_mul(z, h);
            let target = ring.sector(theta).map(|s| s.id);
            let c = match target {
                Some(_) => lift_c(ring, z, h)?,
                None => Element::zero(),
            };
            products.push(ProductRelation { left: z, right: h, target, factors: ring.c_factors(z, h), c });
        }
    }
    let mut kernels = Vec::new();
    for &(z, age) in &twisted {
        let tr = ring.twisted_ring(z).expect("twisted");
        for (d, piece) in pr.pieces() {
            if *d + age > ring.d_max() {
                continue;
            }
            let m = match inst.restriction_matrix(tr, *d) {
                Some(m) => m,
                None => Matrix::zeros(0, piece.dim()),
            };
            let target = tr.piece(*d).map_or_else(|| Lattice::zero(0), |p| p.lattice.clone());
            for v in relative_kernel(&m, &target, &piece.lattice) {
                kernels.push(KernelRelation { sector: z, degree: *d, alpha: pr.homogeneous(*d, v)? });
            }
        }
    }
    Ok(AmbientPresentation { symbols: twisted, products, kernels })
}

impl AmbientPresentation {
    pub fn render(&self, ring: &StringyRing) -> Vec<String> {
        let inst = ring.instance();
        let mut out = Vec::new();
        for (z, age) in &self.symbols {
            out.push(format!("symbol {} degree {}", z.symbol(), age));
        }
        for p in &self.products {
            let rhs = match p.target {
                None => "0".to_string(),
                Some(t) if t.is_trivial() => inst.render_pair(&p.c),
                Some(t) => match inst.render_pair(&p.c).as_str() {
                    "1" => t.symbol(),
                    body => format!("({body}) {}", t.symbol()),
                },
            };
            out.push(format!("{} * {} = {}", p.left.symbol(), p.right.symbol(), rhs));
        }
        for k in &self.kernels {
            out.push(format!("({}) {} = 0", inst.render_pair(&k.alpha), k.sector.symbol()));
        }
        out
    }
}

/// Outcome of one of the three equivalent conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition {
    pub holds: bool,
    /// Chow degree of the first failure.
    pub first_failure: Option<Degree>,
    pub witness: Option<String>,
}

impl Condition {
    fn from_failure(f: Option<(Degree, String)>) -> Self {
        match f {
            None => Self { holds: true, first_failure: None, witness: None },
            Some((d, w)) => Self { holds: false, first_failure: Some(d), witness: Some(w) },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceReport {
    /// Some weight differs from 1.
    pub applicable: bool,
    pub i_surjective: Condition,
    pub ambient_full: Condition,
    pub generated: Condition,
}

impl EquivalenceReport {
    pub fn consistent(&self) -> bool {
        self.i_surjective.holds == self.ambient_full.holds && self.ambient_full.holds == self.generated.holds
    }
}

/// Twisted-sector multisets with total age `≤ cap`, as products in the ring.
fn e_monomials(ring: &StringyRing, cap: Rational) -> Result<Vec<(Rational, StringyClass)>, StringyError> {
    let twisted: Vec<_> = ring.twisted().map(|s| (s.id, s.age)).collect();
    let mut out = vec![(Rational::zero(), ring.e(SectorId::TRIVIAL)?)];
    let mut frontier = vec![(0usize, Rational::zero(), ring.e(SectorId::TRIVIAL)?)];
    while let Some((start, deg, cls)) = frontier.pop() {
        for (i, &(z, age)) in twisted.iter().enumerate().skip(start) {
            let nd = deg + age;
            if nd > cap {
                continue;
            }
            let next = ring.star(&cls, &ring.e(z)?)?;
            if next.is_zero() {
                continue;
            }
            out.push((nd, next.clone()));
            frontier.push((i, nd, next));
        }
    }
    Ok(out)
}

/// Evaluates, up to `d_max`: `i*` surjective; every ambient image full;
/// the subalgebra generated by the `e_ζ` over `A*(𝒳)` is everything.
pub fn check_equivalences(ring: &StringyRing) -> Result<EquivalenceReport, PresentationError> {
    let inst = ring.instance();
    let applicable = inst.center().weights().iter().any(|&b| b != 1);

    let mut fail_i = None;
    for (d, piece) in inst.ay().pieces() {
        let img = inst.pull_i().image_lattice(*d).unwrap_or_else(|| piece.lattice.clone());
        if let Some(label) = missing_label(piece, &img) {
            fail_i = Some((*d, format!("degree {d}: {label} is not a restriction from X")));
            break;
        }
    }

    let mut fail_amb: Option<(Degree, String)> = None;
    for s in ring.twisted() {
        let img = ambient_image(ring, s.id)?;
        if let Some(gap) = img.first_gap() {
            let better = fail_amb.as_ref().is_none_or(|(d, _)| gap.degree < *d);
            if better {
                let w = gap.witness.clone().unwrap_or_default();
                fail_amb = Some((gap.degree, format!("sector {} degree {}: {} is not ambient", s.id, gap.degree, w)));
            }
        }
    }

    let pr = inst.blowup_ring();
    let alphas: Vec<(Degree, PairElement)> =
        pr.pieces().keys().flat_map(|d| pr.canonical_generators(*d).into_iter().map(move |x| (*d, x))).collect();
    let mut spans: BTreeMap<(SectorId, Degree), Vec<Vec<Int>>> = BTreeMap::new();
    for (mdeg, m) in e_monomials(ring, ring.d_max())? {
        for (d, a) in &alphas {
            if *d + mdeg > ring.d_max() {
                continue;
            }
            let p = ring.star(&ring.untwisted(a.clone()), &m)?;
            for (id, x) in p.components() {
                for (cd, v) in x.components() {
                    spans.entry((*id, *cd)).or_default().push(v.clone());
                }
            }
        }
    }
    let mut fail_gen: Option<(Degree, String)> = None;
    for s in ring.sectors() {
        let g = ring.sector_graded(s.id).expect("nonempty sector");
        for (d, piece) in g.pieces() {
            if *d + s.age > ring.d_max() {
                continue;
            }
            let gens = spans.remove(&(s.id, *d)).unwrap_or_default();
            let lat = piece.lattice.extended(gens);
            if let Some(label) = missing_label(piece, &lat) {
                if fail_gen.as_ref().is_none_or(|(d0, _)| d < d0) {
                    fail_gen = Some((
                        *d,
                        format!("sector {} degree {} (stringy {}): {} is not generated", s.id, d, *d + s.age, label),
                    ));
                }
                break;
            }
        }
    }

    Ok(EquivalenceReport {
        applicable,
        i_surjective: Condition::from_failure(fail_i),
        ambient_full: Condition::from_failure(fail_amb),
        generated: Condition::from_failure(fail_gen),
    })
}

/// How `i*`-preimages are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftStrategy {
    /// The solution returned by the integer solver.
    Canonical,
    /// The solver's solution plus a seeded random element of `ker i*` in
    /// every slot where the relations absorb the difference.
    Shifted(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum RelationKind {
    /// `Q(t)`.
    Q,
    /// `t·κ`, `κ ∈ ker i*`.
    TKernel,
    /// `e_ζ·κ`, `κ ∈ ker i*`.
    EKernel,
    /// `e_ζ·∏_{ζ^{b_k}=1} 𝐞_k`.
    ESector,
    /// `e_ζe_η − C_{ζη}e_{ζη}`.
    Product,
}

#[derive(Clone, Debug)]
pub struct Relation {
    pub kind: RelationKind,
    pub poly: Polynomial,
    pub degree: Rational,
}

/// One chosen `i*`-preimage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftRecord {
    pub context: String,
    pub degree: Degree,
    pub class: String,
    pub lift: String,
}

/// `A*(X)[t, e_ζ] / J` with all choices recorded.
#[derive(Clone, Debug)]
pub struct TheoremPresentation {
    /// Generators of `A*(X)`, then `t`, then one `e[c/r]` per twisted sector.
    pub names: Vec<String>,
    pub degrees: Vec<Rational>,
    pub sectors: Vec<SectorId>,
    pub applicable: bool,
    pub q: Option<Polynomial>,
    pub relations: Vec<Relation>,
    pub lifts: Vec<LiftRecord>,
    products: BTreeMap<(SectorId, SectorId), (Polynomial, Option<SectorId>)>,
}

impl TheoremPresentation {
    pub fn nx(&self) -> usize {
        self.names.len() - 1 - self.sectors.len()
    }

    pub fn name_refs(&self) -> Vec<&str> {
        self.names.iter().map(String::as_str).collect()
    }

    pub fn render_relation(&self, r: &Relation) -> String {
        r.poly.render(&self.name_refs())
    }
}

struct Lifter<'a> {
    inst: &'a BlowupInstance,
    rng: Option<ChaCha8Rng>,
    nv: usize,
    records: Vec<LiftRecord>,
}

impl Lifter<'_> {
    fn embed_x(&self, p: &Polynomial) -> Polynomial {
        let map: Vec<usize> = (0..self.inst.ax().nvars()).collect();
        p.embed(self.nv, &map)
    }

    fn t(&self) -> Polynomial {
        Polynomial::var(self.nv, self.inst.ax().nvars())
    }

    /// Lift of a class of `A*(Y)` of degree `d` to `A*(X)`.
    fn lift(&mut self, y: &Polynomial, d: Degree, shift: bool, context: &str) -> Result<Polynomial, PresentationError> {
        let inst = self.inst;
        let ycls = inst.ay().from_poly(y)?;
        let x = inst.pull_i().preimage(&ycls, d).ok_or_else(|| PresentationError::NoLift {
            context: context.into(),
            class: inst.ay().render(&ycls),
            degree: d,
        })?;
        let mut x = x;
        if shift {
            if let Some(rng) = self.rng.as_mut() {
                for k in inst.pull_i().kernel_in_degree(d) {
                    let c = Int::from(rng.gen_range(-3i64..=3));
                    x = inst.ax().add(&x, &inst.ax().scale(&c, &k));
                }
            }
        }
        let xp = inst.ax().to_poly(&x);
        if !ycls.is_zero() || !x.is_zero() {
            self.records.push(LiftRecord {
                context: context.into(),
                degree: d,
                class: inst.ay().render(&ycls),
                lift: xp.render(&inst.ax().names()),
            });
        }
        Ok(self.embed_x(&xp))
    }

    /// `Σ_j t^j·lift(coeff_j(p))` over slots `j ≥ from`; slots are shifted
    /// from `shift_from` on.
    fn lift_center_poly(
        &mut self,
        p: &Polynomial,
        total: Degree,
        from: u32,
        shift_from: u32,
        context: &str,
    ) -> Result<Polynomial, PresentationError> {
        let inst = self.inst;
        let parts = p.split_by_var(inst.t_index());
        let top = total.floor().to_integer().max(0) as u32;
        let mut out = Polynomial::zero(self.nv);
        for j in from..=top {
            let d = total - Degree::from(j as i64);
            if inst.ax().piece(d).is_none() && !parts.contains_key(&j) {
                continue;
            }
            let coeff = parts.get(&j).map_or_else(|| Polynomial::zero(inst.ay().nvars()), |c| inst.drop_t(c));
            let l = self.lift(&coeff, d, j >= shift_from, &format!("{context}, coefficient of t^{j}"))?;
            out = &out + &(&self.t().pow(j) * &l);
        }
        Ok(out)
    }
}

/// Builds the presentation over `A*(X)`; requires `i*` surjective up to
/// `d_max`.
pub fn theorem_presentation(ring: &StringyRing, strategy: LiftStrategy) -> Result<TheoremPresentation, PresentationError> {
    let inst = ring.instance();
    for (d, ok) in inst.pull_i().is_surjective() {
        if !ok {
            return Err(PresentationError::NotSurjective { degree: d });
        }
    }
    let nx = inst.ax().nvars();
    let sectors: Vec<SectorId> = ring.twisted().map(|s| s.id).collect();
    let mut names: Vec<String> = inst.ax().names().iter().map(|s| s.to_string()).collect();
    names.push("t".into());
    names.extend(sectors.iter().map(|z| format!("e[{}/{}]", z.numerator(), z.order())));
    let mut degrees = inst.ax().presentation().degrees();
    degrees.push(Degree::one());
    degrees.extend(ring.twisted().map(|s| s.age));
    let nv = names.len();
    let rng = match strategy {
        LiftStrategy::Canonical => None,
        LiftStrategy::Shifted(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
    };
    let mut lifter = Lifter { inst, rng, nv, records: Vec::new() };
    let e_var = |i: usize| Polynomial::var(nv, nx + 1 + i);
    let d_max = ring.d_max();
    let mut relations = Vec::new();

    // (i) Q(t) and t·ker i*
    let codim = Degree::from(inst.codim() as i64);
    let q = if codim <= d_max {
        let y = lifter.embed_x(&inst.ax().to_poly(&inst.center().y_class));
        let rest = lifter.lift_center_poly(&inst.total_p(), codim, 1, 1, "Q(t)")?;
        let q = &y + &rest;
        relations.push(Relation { kind: RelationKind::Q, poly: q.clone(), degree: codim });
        Some(q)
    } else {
        None
    };
    let kernels: Vec<(Degree, Vec<Element>)> =
        inst.ax().pieces().keys().map(|d| (*d, inst.pull_i().kernel_in_degree(*d))).collect();
    for (d, ks) in &kernels {
        for k in ks {
            let kp = lifter.embed_x(&inst.ax().to_poly(k));
            if d_max - *d >= Degree::one() {
                relations.push(Relation { kind: RelationKind::TKernel, poly: &lifter.t() * &kp, degree: *d + 1 });
            }
            for (i, s) in ring.twisted().enumerate() {
                if *d + s.age <= d_max {
                    relations.push(Relation { kind: RelationKind::EKernel, poly: &e_var(i) * &kp, degree: *d + s.age });
                }
            }
        }
    }

    // (ii) e_ζ·∏_{ζ^{b_k}=1} 𝐞_k
    for (i, s) in ring.twisted().enumerate() {
        let rel = s.relation.as_ref().expect("twisted");
        let total: Degree = inst
            .center()
            .ideals
            .iter()
            .filter(|k| s.id.pow_is_trivial(k.weight))
            .map(|k| Degree::from(k.codim as i64))
            .sum();
        if total + s.age > d_max {
            continue;
        }
        let l = lifter.lift_center_poly(rel, total, 0, 0, &format!("sector {} relation", s.id))?;
        relations.push(Relation { kind: RelationKind::ESector, poly: &e_var(i) * &l, degree: total + s.age });
    }

    // (iii) e_ζe_η − C_{ζη}e_{ζη}
    let mut products = BTreeMap::new();
    let tw: Vec<_> = ring.twisted().map(|s| (s.id, s.age)).collect();
    for (i, &(z, az)) in tw.iter().enumerate() {
        for (j, &(h, ah)) in tw.iter().enumerate().skip(i) {
            if az + ah > d_max {
                continue;
            }
            let lhs = &e_var(i) * &e_var(j);
            let theta = sector_mul(z, h);
            let Some(target) = ring.sector(theta) else {
                products.insert((z, h), (Polynomial::zero(nv), None));
                relations.push(Relation { kind: RelationKind::Product, poly: lhs, degree: az + ah });
                continue;
            };
            let cdeg = az + ah - target.age;
            let c = ring.c_poly(z, h);
            let context = format!("C for {} * {}", z.symbol(), h.symbol());
            let lifted = if theta.is_trivial() {
                let c0 = c.split_by_var(inst.t_index()).remove(&0);
                if let Some(c0) = c0 {
                    if !inst.ay().from_poly(&inst.drop_t(&c0))?.is_zero() {
                        return Err(PresentationError::Internal(format!("{context} has a constant term")));
                    }
                }
                lifter.lift_center_poly(&c, cdeg, 1, 1, &context)?
            } else {
                lifter.lift_center_poly(&c, cdeg, 0, 0, &context)?
            };
            let rhs = if theta.is_trivial() {
                lifted.clone()
            } else {
                let k = tw.iter().position(|(id, _)| *id == theta).expect("twisted target");
                &lifted * &e_var(k)
            };
            products.insert((z, h), (lifted, Some(theta)));
            relations.push(Relation { kind: RelationKind::Product, poly: &lhs - &rhs, degree: az + ah });
        }
    }

    Ok(TheoremPresentation {
        names,
        degrees,
        sectors,
        applicable: inst.center().weights().iter().any(|&b| b != 1),
        q,
        relations,
        lifts: lifter.records,
        products,
    })
}

/// All exponent vectors of exactly the given weighted degree.
fn monomials_of_degree(weights: &[Rational], target: Rational) -> Vec<Exponents> {
    fn go(weights: &[Rational], i: usize, left: Rational, cur: &mut Exponents, out: &mut Vec<Exponents>) {
        if i == weights.len() {
            if left.is_zero() {
                out.push(cur.clone());
            }
            return;
        }
        let mut k = 0u32;
        let mut rem = left;
        while rem >= Rational::zero() {
            cur.push(k);
            go(weights, i + 1, rem, cur, out);
            cur.pop();
            k += 1;
            rem -= weights[i];
        }
    }
    let mut out = Vec::new();
    if target >= Rational::zero() {
        go(weights, 0, target, &mut Vec::new(), &mut out);
    }
    out
}

/// Label of a spanning class `x^a·tⁿ·e_θ` of the presented algebra.
type Label = (Exponents, u32, Option<SectorId>);

/// One stringy degree of the verification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeCheck {
    pub degree: Rational,
    pub presented: String,
    pub direct: String,
    pub relations_vanish: bool,
    pub surjective: bool,
}

impl DegreeCheck {
    pub fn isomorphic(&self) -> bool {
        self.presented == self.direct && self.relations_vanish && self.surjective
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub d_max: Rational,
    pub degrees: Vec<DegreeCheck>,
}

impl VerifyReport {
    pub fn isomorphic(&self) -> bool {
        self.degrees.iter().all(DegreeCheck::isomorphic)
    }

    pub fn first_mismatch(&self) -> Option<Rational> {
        self.degrees.iter().find(|d| !d.isomorphic()).map(|d| d.degree)
    }
}

struct Verifier<'a> {
    ring: &'a StringyRing,
    pres: &'a TheoremPresentation,
}

impl Verifier<'_> {
    /// Reduces every term to at most one `e`, folding left in sector order.
    fn rho(&self, p: &Polynomial) -> Result<Vec<(Polynomial, Option<SectorId>)>, PresentationError> {
        let nx = self.pres.nx();
        let nv = self.pres.names.len();
        let mut out = Vec::new();
        for (e, c) in p.terms() {
            let mut base = e[..=nx].to_vec();
            base.extend(std::iter::repeat_n(0, self.pres.sectors.len()));
            let mut cur = Polynomial::monomial(base, c.clone());
            let mut sector: Option<SectorId> = None;
            let mut dead = false;
            for (i, &k) in e[nx + 1..].iter().enumerate() {
                for _ in 0..k {
                    let z = self.pres.sectors[i];
                    let Some(s) = sector else {
                        sector = Some(z);
                        continue;
                    };
                    let key = if s <= z { (s, z) } else { (z, s) };
                    let (lift, target) = self.pres.products.get(&key).ok_or_else(|| {
                        PresentationError::Internal(format!("no product relation for {} * {}", key.0, key.1))
                    })?;
                    match target {
                        None => dead = true,
                        Some(t) => {
                            cur = &cur * lift;
                            sector = (!t.is_trivial()).then_some(*t);
                        }
                    }
                }
            }
            debug_assert_eq!(cur.nvars(), nv);
            if !dead {
                out.push((cur, sector));
            }
        }
        Ok(out)
    }

    fn row(&self, p: &Polynomial, index: &HashMap<Label, usize>, n: usize) -> Result<Vec<Int>, PresentationError> {
        let nx = self.pres.nx();
        let mut v = vec![Int::zero(); n];
        for (q, s) in self.rho(p)? {
            for (e, c) in q.terms() {
                let key = (e[..nx].to_vec(), e[nx], s);
                let i = index
                    .get(&key)
                    .ok_or_else(|| PresentationError::Internal("relation term outside its degree".into()))?;
                v[*i] += c;
            }
        }
        Ok(v)
    }

    /// `Φ(x^a tⁿ e_θ)` as coordinates of the sector piece.
    fn phi(&self, label: &Label) -> Result<(SectorId, Element), PresentationError> {
        let inst = self.ring.instance();
        let (a, n, s) = label;
        let xm = Polynomial::monomial(a.clone(), Int::one());
        let tn = inst.t_poly().pow(*n);
        match s {
            None => {
                let x = if *n == 0 {
                    inst.pair(&Polynomial::zero(inst.yt_nvars()), &xm)?
                } else {
                    inst.pair(&(&tn * &inst.pull_poly(&xm)), &Polynomial::zero(inst.ax().nvars()))?
                };
                Ok((SectorId::TRIVIAL, x))
            }
            Some(z) => {
                let r = self.ring.twisted_ring(*z).expect("twisted");
                Ok((*z, r.from_poly(&(&tn * &inst.pull_poly(&xm)))?))
            }
        }
    }

    fn check_degree(&self, delta: Rational) -> Result<DegreeCheck, PresentationError> {
        let ring = self.ring;
        let inst = ring.instance();
        let ax = inst.ax();

        // spanning labels of the presented algebra, in blocks (e_θ, tⁿ, X-degree)
        let mut labels: Vec<Label> = Vec::new();
        let mut xblocks: Vec<(Option<SectorId>, u32, Degree)> = Vec::new();
        let mut opts: Vec<(Option<SectorId>, Rational)> = vec![(None, Rational::zero())];
        opts.extend(ring.twisted().map(|s| (Some(s.id), s.age)));
        for (s, age) in &opts {
            let mut k = 0u32;
            while Rational::from(k as i64) + age <= delta {
                let dx = delta - age - Rational::from(k as i64);
                let mons = ax.monomials(dx);
                if !mons.is_empty() {
                    xblocks.push((*s, k, dx));
                    labels.extend(mons.iter().map(|m| (m.clone(), k, *s)));
                }
                k += 1;
            }
        }
        let index: HashMap<Label, usize> = labels.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        let n = labels.len();

        let mut rows: Vec<Vec<Int>> = Vec::new();
        for (s, k, dx) in &xblocks {
            let Some(p) = ax.piece(*dx) else { continue };
            for r in p.lattice.basis().row_vecs() {
                let mut v = vec![Int::zero(); n];
                for (m, c) in ax.monomials(*dx).iter().zip(&r) {
                    v[index[&(m.clone(), *k, *s)]] += c;
                }
                rows.push(v);
            }
        }
        for rel in &self.pres.relations {
            let rest = delta - rel.degree;
            if rest < Rational::zero() {
                continue;
            }
            for u in monomials_of_degree(&self.pres.degrees, rest) {
                let up = Polynomial::monomial(u, Int::one());
                rows.push(self.row(&(&up * &rel.poly), &index, n)?);
            }
        }
        let presented = Lattice::new(n, rows.clone()).quotient();

        // direct sum of the sector pieces
        let mut blocks: Vec<(SectorId, Degree, usize, &Piece)> = Vec::new();
        let mut offset = 0;
        for s in ring.sectors() {
            let d = delta - s.age;
            if let Some(p) = sector_piece(ring, s.id, d) {
                blocks.push((s.id, d, offset, p));
                offset += p.dim();
            }
        }
        let total = offset;
        let mut drows = Vec::new();
        for (_, _, off, p) in &blocks {
            for r in p.lattice.basis().row_vecs() {
                let mut v = vec![Int::zero(); total];
                v[*off..*off + p.dim()].clone_from_slice(&r);
                drows.push(v);
            }
        }
        let direct_lat = Lattice::new(total, drows);
        let direct = direct_lat.quotient();

        // Φ on labels
        let mut cols = Vec::with_capacity(n);
        for l in &labels {
            let (id, x) = self.phi(l)?;
            let mut v = vec![Int::zero(); total];
            if let Some((_, d, off, p)) = blocks.iter().find(|b| b.0 == id) {
                if let Some(c) = x.component(*d) {
                    v[*off..*off + p.dim()].clone_from_slice(c);
                }
            }
            cols.push(v);
        }
        let phi = Matrix::from_columns(&cols, total);
        let relations_vanish = rows.iter().all(|r| direct_lat.contains(&phi.mul_vec(r)));
        let surjective = direct_lat.extended(cols).is_full();

        Ok(DegreeCheck {
            degree: delta,
            presented: presented.to_string(),
            direct: direct.to_string(),
            relations_vanish,
            surjective,
        })
    }
}

/// Compares the presented algebra with the stringy ring in every stringy
/// degree `≤ d_max`.
pub fn verify_presentation(ring: &StringyRing, pres: &TheoremPresentation) -> Result<VerifyReport, PresentationError> {
    let inst = ring.instance();
    let l = ring.sectors().iter().fold(inst.denominator(), |acc, s| acc.lcm(&s.id.order()));
    let v = Verifier { ring, pres };
    let degrees = degree_grid(ring.d_max(), l)
        .into_iter()
        .map(|d| v.check_degree(d))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(VerifyReport { d_max: ring.d_max(), degrees })
}

/// Per-degree rank/torsion invariants of a verification, for comparison.
pub fn invariants(report: &VerifyReport) -> Vec<(Rational, String)> {
    report.degrees.iter().map(|d| (d.degree, d.presented.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_enumeration() {
        let w = [Rational::one(), Rational::new(1, 2)];
        let ms = monomials_of_degree(&w, Rational::one());
        assert_eq!(ms, vec![vec![0, 2], vec![1, 0]]);
        assert_eq!(monomials_of_degree(&w, Rational::zero()), vec![vec![0, 0]]);
        assert!(monomials_of_degree(&w, Rational::new(1, 3)).is_empty());
        assert_eq!(monomials_of_degree(&[], Rational::zero()), vec![Vec::<u32>::new()]);
    }
}
