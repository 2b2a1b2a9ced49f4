//! Degree-truncated normal forms for graded ℤ-modules and ℤ-algebras.
//!
//! Every graded object here is stored piece by piece: for each degree up to
//! a truncation bound there is a finite spanning list, a relation lattice in
//! Hermite form, and the canonical abelian-group presentation of the
//! quotient. Elements are coordinate vectors over the spanning lists, always
//! kept reduced modulo the relation lattice, so equality is coordinate
//! equality after reduction.

mod morphism;
mod poly;
mod ring;

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::zlin::{AbGroupPresentation, Lattice};
use crate::{Degree, Int};

pub use morphism::{GradedMorphism, MorphismKind};
pub use poly::{parse_polynomial, Exponents, Homogeneity, ParseError, Polynomial};
pub use ring::{GradedRing, RingPresentation};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GradedError {
    #[error("generator '{name}' has degree {degree}; generator degrees must be positive")]
    NonPositiveGenerator { name: String, degree: Degree },
    #[error("degree {degree} of '{name}' is not a multiple of 1/{denominator}")]
    DenominatorMismatch { name: String, degree: Degree, denominator: i64 },
    #[error("relation '{relation}' is not homogeneous")]
    NonHomogeneous { relation: String },
    #[error("relation '{relation}' has degree 0; the degree-0 piece must stay ℤ")]
    DegreeZeroRelation { relation: String },
    #[error("degree overflow: a nonzero component in degree {degree} exceeds the truncation bound {d_max}")]
    DegreeOverflow { degree: Degree, d_max: Degree },
    #[error("image of '{generator}' must be homogeneous of degree {expected}")]
    BadImage { generator: String, expected: Degree },
    #[error("morphism {name} is not well defined: {detail}")]
    NotWellDefined { name: String, detail: String },
    #[error("the truncation bound must be non-negative, got {0}")]
    NegativeBound(Degree),
    #[error("parse error in '{source_text}': {error}")]
    Parse { source_text: String, error: ParseError },
}

/// One graded piece: spanning labels, relation lattice, canonical group.
#[derive(Clone, Debug)]
pub struct Piece {
    pub degree: Degree,
    pub labels: Vec<String>,
    pub lattice: Lattice<Int>,
    pub group: AbGroupPresentation<Int>,
}

impl Piece {
    pub fn new(degree: Degree, labels: Vec<String>, relations: Vec<Vec<Int>>) -> Self {
        let lattice = Lattice::new(labels.len(), relations);
        let group = lattice.quotient();
        Self { degree, labels, lattice, group }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn is_zero(&self) -> bool {
        self.group.is_trivial()
    }
}

/// A (not necessarily homogeneous) element, as reduced coordinates per
/// degree. Zero components are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Element {
    comps: BTreeMap<Degree, Vec<Int>>,
}

impl Element {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Raw constructor; coordinates are trusted to be reduced.
    pub(crate) fn from_reduced(comps: BTreeMap<Degree, Vec<Int>>) -> Self {
        let comps = comps.into_iter().filter(|(_, v)| v.iter().any(|x| !x.is_zero())).collect();
        Self { comps }
    }

    pub fn components(&self) -> &BTreeMap<Degree, Vec<Int>> {
        &self.comps
    }

    pub fn component(&self, d: Degree) -> Option<&Vec<Int>> {
        self.comps.get(&d)
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// The single degree of a nonzero homogeneous element.
    pub fn degree(&self) -> Option<Degree> {
        if self.comps.len() == 1 {
            self.comps.keys().next().copied()
        } else {
            None
        }
    }
}

/// A graded ℤ-module stored as reduced pieces.
///
/// Object safe, so rings of different shapes (polynomial quotients, pair
/// rings) can sit behind one interface.
pub trait Graded {
    fn d_max(&self) -> Degree;

    /// Pieces with a nonempty spanning list; all other degrees are zero.
    fn pieces(&self) -> &BTreeMap<Degree, Piece>;

    fn piece(&self, d: Degree) -> Option<&Piece> {
        self.pieces().get(&d)
    }

    /// Homogeneous element from raw coordinates in degree `d`.
    fn homogeneous(&self, d: Degree, coords: Vec<Int>) -> Result<Element, GradedError> {
        if coords.iter().all(Zero::is_zero) {
            return Ok(Element::zero());
        }
        let Some(p) = self.piece(d) else {
            return Err(GradedError::DegreeOverflow { degree: d, d_max: self.d_max() });
        };
        assert_eq!(coords.len(), p.dim(), "coordinate length does not match the piece");
        let mut v = coords;
        p.lattice.reduce(&mut v);
        let mut m = BTreeMap::new();
        m.insert(d, v);
        Ok(Element::from_reduced(m))
    }

    fn reduce(&self, x: &Element) -> Element {
        let mut out = BTreeMap::new();
        for (d, v) in &x.comps {
            let mut w = v.clone();
            if let Some(p) = self.piece(*d) {
                p.lattice.reduce(&mut w);
            }
            out.insert(*d, w);
        }
        Element::from_reduced(out)
    }

    fn add(&self, x: &Element, y: &Element) -> Element {
        let mut out = x.comps.clone();
        for (d, v) in &y.comps {
            match out.get_mut(d) {
                Some(w) => {
                    for (a, b) in w.iter_mut().zip(v) {
                        *a += b;
                    }
                }
                None => {
                    out.insert(*d, v.clone());
                }
            }
        }
        self.reduce(&Element { comps: out })
    }

    fn neg(&self, x: &Element) -> Element {
        self.scale(&Int::from(-1), x)
    }

    fn sub(&self, x: &Element, y: &Element) -> Element {
        self.add(x, &self.neg(y))
    }

    fn scale(&self, k: &Int, x: &Element) -> Element {
        let comps = x
            .comps
            .iter()
            .map(|(d, v)| (*d, v.iter().map(|c| c * k).collect()))
            .collect();
        self.reduce(&Element { comps })
    }

    /// Representative with balanced residues, for printing only.
    fn display_form(&self, x: &Element) -> Element {
        let mut out = BTreeMap::new();
        for (d, v) in &x.comps {
            let mut w = v.clone();
            if let Some(p) = self.piece(*d) {
                p.lattice.reduce_balanced(&mut w);
            }
            out.insert(*d, w);
        }
        Element::from_reduced(out)
    }

    fn equal(&self, x: &Element, y: &Element) -> bool {
        self.sub(x, y).is_zero()
    }

    /// Canonical generators of the degree-`d` piece, torsion first.
    fn canonical_generators(&self, d: Degree) -> Vec<Element> {
        let Some(p) = self.piece(d) else { return Vec::new() };
        p.group
            .generators()
            .into_iter()
            .map(|g| self.homogeneous(d, g).expect("degree present"))
            .collect()
    }

    /// Canonical coordinates of the degree-`d` component.
    fn canonical_coordinates(&self, x: &Element, d: Degree) -> Vec<Int> {
        match (self.piece(d), x.component(d)) {
            (Some(p), Some(v)) => p.group.canonical_coordinates(v),
            (Some(p), None) => p.group.canonical_coordinates(&vec![Int::zero(); p.dim()]),
            _ => Vec::new(),
        }
    }

    /// Group of the degree-`d` piece; absent degrees are the zero group.
    fn group_in_degree(&self, d: Degree) -> Option<&AbGroupPresentation<Int>> {
        self.piece(d).map(|p| &p.group)
    }
}

/// Renders a group presentation; absent pieces print as `0`.
pub fn render_group(g: Option<&AbGroupPresentation<Int>>) -> String {
    g.map_or_else(|| "0".to_string(), |g| g.to_string())
}

/// All degrees `k/L` with `0 ≤ k/L ≤ d_max`.
pub fn degree_grid(d_max: Degree, denominator: i64) -> Vec<Degree> {
    let top = (d_max * Degree::from(denominator)).floor().to_integer();
    (0..=top).map(|k| Degree::new(k, denominator)).collect()
}
