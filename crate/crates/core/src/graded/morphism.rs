//! Graded ring maps and degree-shifting module maps between graded rings.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use super::poly::{Exponents, Homogeneity, Polynomial};
use super::{Element, Graded, GradedError, GradedRing};
use crate::zlin::{kernel_basis, solve_integer, Lattice, Matrix};
use crate::{Degree, Int, IntMatrix};

#[derive(Clone, Debug)]
pub enum MorphismKind {
    /// Determined by the images of the source generators.
    Ring { images: Vec<Polynomial> },
    /// Determined by the images of the source spanning monomials; missing
    /// monomials map to zero.
    Module { shift: Degree, images: BTreeMap<Exponents, Polynomial> },
}

/// A graded map with its per-degree matrices precomputed.
#[derive(Clone, Debug)]
pub struct GradedMorphism {
    name: String,
    source: Arc<GradedRing>,
    target: Arc<GradedRing>,
    kind: MorphismKind,
    /// Columns are target coordinates of the source spanning monomials.
    matrices: BTreeMap<Degree, IntMatrix>,
}

impl GradedMorphism {
    /// Ring map given by generator images; checks that every relation maps
    /// to zero wherever the target degree is within bounds.
    pub fn ring_map(
        name: &str,
        source: Arc<GradedRing>,
        target: Arc<GradedRing>,
        images: Vec<Polynomial>,
    ) -> Result<Self, GradedError> {
        assert_eq!(images.len(), source.nvars(), "one image per generator");
        let tdeg = target.presentation().degrees();
        for ((gname, gdeg), img) in source.presentation().generators.iter().zip(&images) {
            match img.homogeneity(&tdeg) {
                Homogeneity::Zero => {}
                Homogeneity::Homogeneous(d) if d == *gdeg => {}
                _ => return Err(GradedError::BadImage { generator: gname.clone(), expected: *gdeg }),
            }
        }
        let snames = source.names();
        for r in &source.presentation().relations {
            let img = r.substitute(&images);
            match target.from_poly(&img) {
                Ok(x) if x.is_zero() => {}
                Ok(x) => {
                    return Err(GradedError::NotWellDefined {
                        name: name.into(),
                        detail: format!("relation {} maps to {} ≠ 0", r.render(&snames), target.render(&x)),
                    })
                }
                Err(GradedError::DegreeOverflow { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        let mut m = Self {
            name: name.into(),
            source,
            target,
            kind: MorphismKind::Ring { images },
            matrices: BTreeMap::new(),
        };
        m.fill_matrices(Degree::zero())?;
        Ok(m)
    }

    /// Additive map raising degrees by `shift`, given on spanning monomials.
    /// Checks that the relation lattice of the source maps into that of the
    /// target.
    pub fn module_map(
        name: &str,
        source: Arc<GradedRing>,
        target: Arc<GradedRing>,
        shift: Degree,
        images: BTreeMap<Exponents, Polynomial>,
    ) -> Result<Self, GradedError> {
        let tdeg = target.presentation().degrees();
        let snames = source.names();
        for (e, img) in &images {
            let expected = source.monomial_degree(e) + shift;
            match img.homogeneity(&tdeg) {
                Homogeneity::Zero => {}
                Homogeneity::Homogeneous(d) if d == expected => {}
                _ => {
                    let label = Polynomial::monomial(e.clone(), Int::from(1)).render(&snames);
                    return Err(GradedError::BadImage { generator: label, expected });
                }
            }
        }
        let mut m = Self {
            name: name.into(),
            source,
            target,
            kind: MorphismKind::Module { shift, images },
            matrices: BTreeMap::new(),
        };
        m.fill_matrices(shift)?;
        for (d, a) in &m.matrices {
            let src = m.source.piece(*d).expect("degree present");
            let Some(tgt) = m.target.piece(*d + shift) else { continue };
            for row in src.lattice.basis().row_vecs() {
                if !tgt.lattice.contains(&a.mul_vec(&row)) {
                    return Err(GradedError::NotWellDefined {
                        name: m.name.clone(),
                        detail: format!("a relation of degree {d} does not map into the relations of the target"),
                    });
                }
            }
        }
        Ok(m)
    }

    pub fn identity(ring: Arc<GradedRing>) -> Self {
        let n = ring.nvars();
        let images = (0..n).map(|i| Polynomial::var(n, i)).collect();
        Self::ring_map("id", ring.clone(), ring, images).expect("identity is well defined")
    }

    fn image_of_monomial(&self, e: &Exponents) -> Polynomial {
        match &self.kind {
            MorphismKind::Ring { images } => {
                Polynomial::monomial(e.clone(), Int::from(1)).substitute(images)
            }
            MorphismKind::Module { images, .. } => {
                images.get(e).cloned().unwrap_or_else(|| Polynomial::zero(self.target.nvars()))
            }
        }
    }

    fn fill_matrices(&mut self, shift: Degree) -> Result<(), GradedError> {
        for (d, p) in self.source.pieces() {
            let td = *d + shift;
            let Some(tp) = self.target.piece(td) else {
                if td <= self.target.d_max() {
                    self.matrices.insert(*d, Matrix::zeros(0, p.dim()));
                }
                continue;
            };
            let mut cols = Vec::with_capacity(p.dim());
            for e in self.source.monomials(*d) {
                let img = self.target.from_poly(&self.image_of_monomial(e))?;
                cols.push(img.component(td).cloned().unwrap_or_else(|| vec![Int::zero(); tp.dim()]));
            }
            self.matrices.insert(*d, Matrix::from_columns(&cols, tp.dim()));
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Arc<GradedRing> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GradedRing> {
        &self.target
    }

    pub fn kind(&self) -> &MorphismKind {
        &self.kind
    }

    pub fn shift(&self) -> Degree {
        match &self.kind {
            MorphismKind::Ring { .. } => Degree::zero(),
            MorphismKind::Module { shift, .. } => *shift,
        }
    }

    /// Matrix from source degree `d` to target degree `d + shift`.
    pub fn matrix_in_degree(&self, d: Degree) -> Option<&IntMatrix> {
        self.matrices.get(&d)
    }

    pub fn apply(&self, x: &Element) -> Result<Element, GradedError> {
        let shift = self.shift();
        let mut comps = BTreeMap::new();
        for (d, v) in x.components() {
            match self.matrices.get(d) {
                Some(a) => {
                    if a.rows() > 0 {
                        comps.insert(*d + shift, a.mul_vec(v));
                    }
                }
                None => {
                    return Err(GradedError::DegreeOverflow { degree: *d + shift, d_max: self.target.d_max() });
                }
            }
        }
        Ok(self.target.reduce(&Element::from_reduced(comps)))
    }

    /// `[A | target relations]`: its column span is the image plus the
    /// target relations.
    fn augmented(&self, d: Degree) -> Option<(IntMatrix, usize)> {
        let a = self.matrices.get(&d)?;
        let tp = self.target.piece(d + self.shift());
        let b = match tp {
            Some(tp) => tp.lattice.basis().transpose(),
            None => Matrix::zeros(0, 0),
        };
        if a.rows() == 0 {
            return Some((a.clone(), a.cols()));
        }
        Some((a.hstack(&b), a.cols()))
    }

    /// Generators of the degree-`d` kernel, as reduced nonzero elements.
    pub fn kernel_in_degree(&self, d: Degree) -> Vec<Element> {
        let Some((aug, n)) = self.augmented(d) else { return Vec::new() };
        let Some(sp) = self.source.piece(d) else { return Vec::new() };
        let k = kernel_basis(&aug);
        let mut gens: Vec<Vec<Int>> = k.column_vecs().into_iter().map(|c| c[..n].to_vec()).collect();
        gens.extend(sp.lattice.basis().row_vecs());
        let lat = Lattice::new(n, gens);
        lat.basis()
            .row_vecs()
            .into_iter()
            .filter_map(|v| {
                let x = self.source.homogeneous(d, v).expect("degree present");
                (!x.is_zero()).then_some(x)
            })
            .collect()
    }

    /// Image plus relations, as a lattice in target coordinates of degree
    /// `e` (a target degree).
    pub fn image_lattice(&self, e: Degree) -> Option<Lattice<Int>> {
        let tp = self.target.piece(e)?;
        let mut gens = tp.lattice.basis().row_vecs();
        if let Some(a) = self.matrices.get(&(e - self.shift())) {
            if a.rows() > 0 {
                gens.extend(a.column_vecs());
            }
        }
        Some(Lattice::new(tp.dim(), gens))
    }

    /// Surjectivity onto the target piece of degree `e`.
    pub fn is_surjective_in_degree(&self, e: Degree) -> bool {
        match self.image_lattice(e) {
            None => true,
            Some(l) => l.is_full(),
        }
    }

    /// Surjectivity verdict for every target degree within bounds.
    pub fn is_surjective(&self) -> BTreeMap<Degree, bool> {
        self.target
            .pieces()
            .keys()
            .map(|e| (*e, self.is_surjective_in_degree(*e)))
            .collect()
    }

    /// Some preimage of a homogeneous target element, if one exists.
    pub fn preimage(&self, y: &Element, target_degree: Degree) -> Option<Element> {
        let d = target_degree - self.shift();
        let tp = self.target.piece(target_degree);
        let Some(tp) = tp else {
            return Some(Element::zero());
        };
        let b = y.component(target_degree).cloned().unwrap_or_else(|| vec![Int::zero(); tp.dim()]);
        if b.iter().all(Zero::is_zero) {
            return Some(Element::zero());
        }
        let (aug, n) = self.augmented(d)?;
        let x = solve_integer(&aug, &b)?;
        Some(self.source.homogeneous(d, x[..n].to_vec()).expect("degree present"))
    }
}
