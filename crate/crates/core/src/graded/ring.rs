//! Finitely presented graded ℤ-algebras with positively graded generators.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use super::poly::{parse_polynomial, Exponents, Homogeneity, Polynomial};
use super::{Element, Graded, GradedError, Piece};
use crate::{Degree, Int};

/// Generators with degrees, homogeneous relations, truncation bound and the
/// grading denominator `L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingPresentation {
    pub generators: Vec<(String, Degree)>,
    pub relations: Vec<Polynomial>,
    pub d_max: Degree,
    pub denominator: i64,
}

impl RingPresentation {
    pub fn new(generators: Vec<(String, Degree)>, relations: Vec<Polynomial>, d_max: Degree, denominator: i64) -> Self {
        Self { generators, relations, d_max, denominator }
    }

    /// Builds a presentation from relation strings over the generator names.
    pub fn parse(generators: &[(&str, Degree)], relations: &[&str], d_max: Degree, denominator: i64) -> Result<Self, GradedError> {
        let names: Vec<&str> = generators.iter().map(|g| g.0).collect();
        let rels = relations
            .iter()
            .map(|r| {
                parse_polynomial(r, &names).map_err(|error| GradedError::Parse { source_text: r.to_string(), error })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(
            generators.iter().map(|(n, d)| (n.to_string(), *d)).collect(),
            rels,
            d_max,
            denominator,
        ))
    }

    pub fn names(&self) -> Vec<&str> {
        self.generators.iter().map(|g| g.0.as_str()).collect()
    }

    pub fn degrees(&self) -> Vec<Degree> {
        self.generators.iter().map(|g| g.1).collect()
    }
}

/// Per-degree normal form of a finitely presented graded ring.
#[derive(Clone, Debug)]
pub struct GradedRing {
    presentation: RingPresentation,
    weights: Vec<i64>,
    pieces: BTreeMap<Degree, Piece>,
    monomials: BTreeMap<Degree, Vec<Exponents>>,
    index: HashMap<Exponents, (Degree, usize)>,
}

fn enumerate_monomials(weights: &[i64], top: i64) -> Vec<(i64, Exponents)> {
    fn go(weights: &[i64], i: usize, left: i64, cur: &mut Exponents, out: &mut Vec<(i64, Exponents)>, top: i64) {
        if i == weights.len() {
            out.push((top - left, cur.clone()));
            return;
        }
        let mut k = 0;
        loop {
            cur[i] = k;
            go(weights, i + 1, left - weights[i] * k as i64, cur, out, top);
            if left - weights[i] * (k as i64 + 1) < 0 {
                break;
            }
            k += 1;
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    let mut cur = vec![0; weights.len()];
    go(weights, 0, top, &mut cur, &mut out, top);
    out
}

impl GradedRing {
    pub fn build(presentation: RingPresentation) -> Result<Self, GradedError> {
        let l = presentation.denominator;
        assert!(l > 0, "grading denominator must be positive");
        if presentation.d_max < Degree::zero() {
            return Err(GradedError::NegativeBound(presentation.d_max));
        }
        let names = presentation.names();
        let mut weights = Vec::new();
        for (name, d) in &presentation.generators {
            if *d <= Degree::zero() {
                return Err(GradedError::NonPositiveGenerator { name: name.clone(), degree: *d });
            }
            let scaled = *d * Degree::from(l);
            if !scaled.is_integer() {
                return Err(GradedError::DenominatorMismatch { name: name.clone(), degree: *d, denominator: l });
            }
            weights.push(scaled.to_integer());
        }
        let degs = presentation.degrees();
        let mut rel_weights = Vec::new();
        for r in &presentation.relations {
            match r.homogeneity(&degs) {
                Homogeneity::Zero => rel_weights.push(None),
                Homogeneity::Mixed => {
                    return Err(GradedError::NonHomogeneous { relation: r.render(&names) });
                }
                Homogeneity::Homogeneous(d) if d.is_zero() => {
                    return Err(GradedError::DegreeZeroRelation { relation: r.render(&names) });
                }
                Homogeneity::Homogeneous(d) => rel_weights.push(Some((d * Degree::from(l)).to_integer())),
            }
        }

        let top = (presentation.d_max * Degree::from(l)).floor().to_integer();
        let mut by_weight: BTreeMap<i64, Vec<Exponents>> = BTreeMap::new();
        for (w, e) in enumerate_monomials(&weights, top) {
            by_weight.entry(w).or_default().push(e);
        }
        let mut monomials = BTreeMap::new();
        let mut index = HashMap::new();
        for (w, list) in by_weight.iter_mut() {
            list.sort();
            let d = Degree::new(*w, l);
            for (i, e) in list.iter().enumerate() {
                index.insert(e.clone(), (d, i));
            }
            monomials.insert(d, list.clone());
        }

        let mut pieces = BTreeMap::new();
        for (w, list) in &by_weight {
            let d = Degree::new(*w, l);
            let mut rows = Vec::new();
            for (r, rw) in presentation.relations.iter().zip(&rel_weights) {
                let Some(rw) = rw else { continue };
                let Some(mults) = by_weight.get(&(w - rw)) else { continue };
                for m in mults {
                    let mut row = vec![Int::zero(); list.len()];
                    for (e, c) in r.terms() {
                        let prod: Exponents = e.iter().zip(m).map(|(a, b)| a + b).collect();
                        let (_, i) = index[&prod];
                        row[i] += c;
                    }
                    rows.push(row);
                }
            }
            let labels = list.iter().map(|e| render_monomial(e, &names)).collect();
            pieces.insert(d, Piece::new(d, labels, rows));
        }
        Ok(Self { presentation, weights, pieces, monomials, index })
    }

    pub fn presentation(&self) -> &RingPresentation {
        &self.presentation
    }

    pub fn names(&self) -> Vec<&str> {
        self.presentation.names()
    }

    pub fn nvars(&self) -> usize {
        self.weights.len()
    }

    pub fn denominator(&self) -> i64 {
        self.presentation.denominator
    }

    /// Spanning monomials of degree `d`.
    pub fn monomials(&self, d: Degree) -> &[Exponents] {
        self.monomials.get(&d).map_or(&[], |v| v.as_slice())
    }

    pub fn monomial_degree(&self, e: &[u32]) -> Degree {
        Polynomial::weighted_degree(e, &self.presentation.degrees())
    }

    /// Degree and position of a monomial within its piece, if within bounds.
    pub fn monomial_index(&self, e: &[u32]) -> Option<(Degree, usize)> {
        self.index.get(e).copied()
    }

    pub fn unit(&self) -> Element {
        self.homogeneous(Degree::zero(), vec![Int::one()]).expect("degree 0 is present")
    }

    pub fn generator(&self, i: usize) -> Result<Element, GradedError> {
        self.from_poly(&Polynomial::var(self.nvars(), i))
    }

    pub fn parse_element(&self, src: &str) -> Result<Element, GradedError> {
        let p = parse_polynomial(src, &self.names())
            .map_err(|error| GradedError::Parse { source_text: src.to_string(), error })?;
        self.from_poly(&p)
    }

    /// Canonical reduction of a polynomial; fails if a nonzero term lies above
    /// the truncation bound.
    pub fn from_poly(&self, p: &Polynomial) -> Result<Element, GradedError> {
        assert_eq!(p.nvars(), self.nvars(), "polynomial over the wrong variables");
        let mut comps: BTreeMap<Degree, Vec<Int>> = BTreeMap::new();
        for (e, c) in p.terms() {
            match self.index.get(e) {
                Some((d, i)) => {
                    let v = comps.entry(*d).or_insert_with(|| vec![Int::zero(); self.monomials[d].len()]);
                    v[*i] += c;
                }
                None => {
                    return Err(GradedError::DegreeOverflow {
                        degree: self.monomial_degree(e),
                        d_max: self.presentation.d_max,
                    })
                }
            }
        }
        Ok(self.reduce(&Element::from_reduced(comps)))
    }

    /// Polynomial representative of a (reduced) element.
    pub fn to_poly(&self, x: &Element) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars());
        for (d, v) in x.components() {
            for (e, c) in self.monomials[d].iter().zip(v) {
                out.add_term(e.clone(), c.clone());
            }
        }
        out
    }

    pub fn mul(&self, x: &Element, y: &Element) -> Result<Element, GradedError> {
        self.from_poly(&(&self.to_poly(x) * &self.to_poly(y)))
    }

    pub fn render(&self, x: &Element) -> String {
        self.to_poly(&self.display_form(x)).render(&self.names())
    }

    /// Per-degree invariants, in degree order.
    pub fn invariants(&self) -> Vec<(Degree, String)> {
        self.pieces.iter().map(|(d, p)| (*d, p.group.to_string())).collect()
    }
}

pub(crate) fn render_monomial(e: &[u32], names: &[&str]) -> String {
    Polynomial::monomial(e.to_vec(), Int::one()).render(names)
}

impl Graded for GradedRing {
    fn d_max(&self) -> Degree {
        self.presentation.d_max
    }

    fn pieces(&self) -> &BTreeMap<Degree, Piece> {
        &self.pieces
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn deg(n: i64) -> Degree {
        Degree::from(n)
    }

    fn ring(gens: &[(&str, i64)], rels: &[&str], d_max: i64) -> GradedRing {
        let gens: Vec<(&str, Degree)> = gens.iter().map(|(n, d)| (*n, deg(*d))).collect();
        GradedRing::build(RingPresentation::parse(&gens, rels, deg(d_max), 1).unwrap()).unwrap()
    }

    fn invariants(r: &GradedRing, top: i64) -> Vec<String> {
        (0..=top).map(|d| super::super::render_group(r.group_in_degree(deg(d)))).collect()
    }

    #[test]
    fn free_polynomial_ring() {
        let r = ring(&[("t", 1)], &[], 3);
        assert_eq!(invariants(&r, 3), vec!["Z", "Z", "Z", "Z"]);
    }

    #[test]
    fn torsion_in_every_degree() {
        let r = ring(&[("t", 1)], &["2*t^2"], 3);
        assert_eq!(invariants(&r, 3), vec!["Z", "Z", "Z/2", "Z/2"]);
        let t = r.parse_element("t").unwrap();
        let t2 = r.mul(&t, &t).unwrap();
        assert!(!t2.is_zero());
        assert!(r.scale(&Int::from(2), &t2).is_zero());
    }

    #[test]
    fn projective_plane() {
        let r = ring(&[("h", 1)], &["h^3"], 4);
        assert_eq!(invariants(&r, 4), vec!["Z", "Z", "Z", "0", "0"]);
        let h2 = r.parse_element("h^2").unwrap();
        assert!(r.mul(&h2, &h2).unwrap().is_zero());
        let one = r.unit();
        assert_eq!(r.mul(&one, &h2).unwrap(), h2);
    }

    #[test]
    fn overflow_is_reported() {
        let r = ring(&[("h", 1)], &["h^3"], 2);
        let h2 = r.parse_element("h^2").unwrap();
        assert!(matches!(r.mul(&h2, &h2), Err(GradedError::DegreeOverflow { .. })));
    }

    #[test]
    fn bad_presentations_are_rejected() {
        let p = RingPresentation::parse(&[("h", deg(1))], &["h + h^2"], deg(3), 1).unwrap();
        assert!(matches!(GradedRing::build(p), Err(GradedError::NonHomogeneous { .. })));
        let p = RingPresentation::parse(&[("h", deg(0))], &[], deg(3), 1).unwrap();
        assert!(matches!(GradedRing::build(p), Err(GradedError::NonPositiveGenerator { .. })));
        let p = RingPresentation::parse(&[("h", Degree::new(1, 2))], &[], deg(3), 1).unwrap();
        assert!(matches!(GradedRing::build(p), Err(GradedError::DenominatorMismatch { .. })));
        let p = RingPresentation::parse(&[("h", deg(1))], &["3"], deg(3), 1).unwrap();
        assert!(matches!(GradedRing::build(p), Err(GradedError::DegreeZeroRelation { .. })));
    }

    #[test]
    fn fractional_grading() {
        let gens = [("u", Degree::new(1, 2))];
        let r = GradedRing::build(RingPresentation::parse(&gens, &["u^3"], deg(2), 2).unwrap()).unwrap();
        assert_eq!(r.pieces().len(), 5);
        assert!(r.piece(Degree::new(3, 2)).unwrap().is_zero());
        assert!(!r.piece(Degree::new(1, 2)).unwrap().is_zero());
    }
}
