mod common;

use proptest::prelude::*;
use sbw_core::graded::{parse_polynomial, render_group};
use sbw_core::stringy::{c_factors, enumerate_sectors, StringyDegree};
use sbw_core::{Degree, Graded, Int, Rational, SectorId, StringyClass, StringyRing};

fn s(r: i64, c: i64) -> SectorId {
    SectorId::new(r, c).unwrap()
}

/// `−t·e_θ` built directly in the target sector.
fn minus_t_e(ring: &StringyRing, theta: SectorId, power: u32) -> StringyClass {
    let inst = ring.instance();
    let p = -&inst.t_poly().pow(power);
    if theta.is_trivial() {
        let zero_x = sbw_core::Polynomial::zero(inst.ax().nvars());
        ring.untwisted(inst.pair(&p, &zero_x).unwrap())
    } else {
        ring.twisted_class(theta, &p).unwrap()
    }
}

/// The sector with argument `n/b`.
fn zeta_n(n: i64, b: i64) -> SectorId {
    SectorId::from_arg(Rational::new(n, b))
}

#[test]
fn root_stack_table_matches_the_closed_formula() {
    for b in [2, 3] {
        let ring = common::stringy(&common::rootstack(b, 3));
        let ids: Vec<_> = ring.sectors().iter().map(|x| x.id).collect();
        let expected: Vec<_> = (0..b).map(|n| zeta_n(n, b)).collect();
        let mut sorted = expected.clone();
        sorted.sort();
        assert_eq!(ids, sorted);
        for n1 in 0..b {
            for n2 in 0..b {
                let lhs = ring.star(&ring.e(zeta_n(n1, b)).unwrap(), &ring.e(zeta_n(n2, b)).unwrap()).unwrap();
                let theta = zeta_n(n1 + n2, b);
                let rhs = if n1 > 0 && n2 > 0 && n1 + n2 <= b {
                    minus_t_e(&ring, theta, 1)
                } else {
                    ring.e(theta).unwrap()
                };
                assert_eq!(lhs, rhs, "b = {b}, n1 = {n1}, n2 = {n2}");
            }
        }
    }
}

#[test]
fn root_stack_ages_and_degrees() {
    let ring = common::stringy(&common::rootstack(3, 3));
    assert_eq!(ring.age(s(3, 1)).unwrap(), Rational::new(2, 3));
    assert_eq!(ring.age(s(3, 2)).unwrap(), Rational::new(1, 3));
    let e = ring.e(s(3, 1)).unwrap();
    assert_eq!(ring.stringy_degree(&e), StringyDegree::Homogeneous(Rational::new(2, 3)));
    assert_eq!(ring.stringy_degree(&ring.e(SectorId::TRIVIAL).unwrap()), StringyDegree::Homogeneous(Rational::from(0)));
    let mixed = ring.add(&e, &ring.e(s(3, 2)).unwrap());
    assert_eq!(ring.stringy_degree(&mixed), StringyDegree::Inhomogeneous);
    assert_eq!(ring.stringy_degree(&StringyClass::zero()), StringyDegree::Zero);
}

#[test]
fn weighted_point_blowup() {
    let ring = common::stringy(&common::point_plane(1, 2, 3));
    let ids: Vec<_> = ring.sectors().iter().map(|x| x.id).collect();
    assert_eq!(ids, vec![SectorId::TRIVIAL, s(2, 1)]);
    assert_eq!(ring.age(s(2, 1)).unwrap(), Rational::from(1));
    let e = ring.e(s(2, 1)).unwrap();
    assert_eq!(ring.star(&e, &e).unwrap(), minus_t_e(&ring, SectorId::TRIVIAL, 2));
    let ey = ring.instance().exceptional_ring();
    let inv: Vec<_> = (0..=3).map(|k| render_group(ey.group_in_degree(Degree::from(k)))).collect();
    assert_eq!(inv, ["Z", "Z", "Z/2", "Z/2"]);
    // the twisted sector ring is ℤ[t]/(2t)
    let tw = ring.twisted_ring(s(2, 1)).unwrap();
    let inv: Vec<_> = (0..=2).map(|k| render_group(tw.group_in_degree(Degree::from(k)))).collect();
    assert_eq!(inv, ["Z", "Z/2", "Z/2"]);
}

#[test]
fn all_weights_one_has_no_twisted_sectors() {
    let ring = common::stringy(&common::point_plane(1, 1, 3));
    assert_eq!(ring.sectors().len(), 1);
    assert!(enumerate_sectors(&[1, 1]).iter().all(|z| z.is_trivial()));
}

#[test]
fn empty_target_sectors_are_dropped() {
    // weights {2, 3}: (2,1)·(3,1) = (6,5), which is empty
    assert!(!enumerate_sectors(&[2, 3]).contains(&s(6, 5)));
    let data = {
        let mut d = common::point_plane(2, 3, 3);
        d.denominator = 6;
        d
    };
    let ring = common::stringy(&data);
    let x = ring.star(&ring.e(s(2, 1)).unwrap(), &ring.e(s(3, 1)).unwrap()).unwrap();
    assert!(x.is_zero());
}

/// `Ob` (strict inequality) times the excess factor (equality), over a
/// window of integers wide enough to hold every factor different from 1.
fn oracle_factors(z: SectorId, h: SectorId, weights: &[i64]) -> Vec<i64> {
    let frac = |x: Rational| x - x.floor();
    let arg = |s: SectorId, a: i64| frac(Rational::new(a * s.numerator(), s.order()));
    let nontrivial = |a: i64| !(arg(z, a).numer() == &0 && arg(h, a).numer() == &0);
    let relevant = |a: i64| a == -1 || weights.contains(&a);
    let top = weights.iter().copied().max().unwrap_or(1);
    let ob: Vec<i64> = (-top..=top).filter(|&a| relevant(a) && nontrivial(a) && arg(z, a) + arg(h, a) > Rational::from(1)).collect();
    let ex: Vec<i64> = (-top..=top).filter(|&a| relevant(a) && nontrivial(a) && arg(z, a) + arg(h, a) == Rational::from(1)).collect();
    let mut all = [ob, ex].concat();
    all.sort();
    all.dedup();
    all
}

#[test]
fn correction_factors_match_obstruction_times_excess() {
    for weights in [vec![2], vec![3], vec![1, 2], vec![2, 4], vec![2, 3], vec![6], vec![4, 6, 1]] {
        let sectors = enumerate_sectors(&weights);
        for &z in &sectors {
            for &h in &sectors {
                assert_eq!(c_factors(z, h, &weights), oracle_factors(z, h, &weights), "{weights:?} {z} {h}");
                assert_eq!(c_factors(z, h, &weights), c_factors(h, z, &weights));
            }
        }
    }
}

fn generators_and_ring(data: &sbw_core::InstanceData) -> (StringyRing, Vec<sbw_core::stringy::StringyGenerator>) {
    let ring = common::stringy(data);
    let gens = ring.canonical_generators(ring.d_max());
    (ring, gens)
}

#[test]
fn unit_commutativity_associativity_on_every_fixture() {
    for (name, data) in common::all() {
        let (ring, gens) = generators_and_ring(&data);
        let one = ring.e(SectorId::TRIVIAL).unwrap();
        let cap = ring.d_max();
        for g in &gens {
            assert_eq!(ring.star(&one, &g.class).unwrap(), g.class, "{name}: unit");
        }
        for a in &gens {
            for b in &gens {
                if a.stringy_degree + b.stringy_degree > cap {
                    continue;
                }
                let ab = ring.star(&a.class, &b.class).unwrap();
                assert_eq!(ab, ring.star(&b.class, &a.class).unwrap(), "{name}: commutativity");
                for c in &gens {
                    if a.stringy_degree + b.stringy_degree + c.stringy_degree > cap {
                        continue;
                    }
                    let l = ring.star(&ab, &c.class).unwrap();
                    let r = ring.star(&a.class, &ring.star(&b.class, &c.class).unwrap()).unwrap();
                    assert_eq!(l, r, "{name}: associativity");
                }
            }
        }
    }
}

#[test]
fn grading_and_sector_bookkeeping() {
    for (name, data) in common::all() {
        let (ring, gens) = generators_and_ring(&data);
        for a in &gens {
            for b in &gens {
                if a.stringy_degree + b.stringy_degree > ring.d_max() {
                    continue;
                }
                let p = ring.star(&a.class, &b.class).unwrap();
                if p.is_zero() {
                    continue;
                }
                assert_eq!(ring.stringy_degree(&p), StringyDegree::Homogeneous(a.stringy_degree + b.stringy_degree), "{name}");
                assert_eq!(p.sector(), Some(sbw_core::stringy::sector_mul(a.sector, b.sector)), "{name}");
            }
        }
    }
}

#[test]
fn untwisted_classes_act_by_restriction() {
    for (name, data) in common::all() {
        let ring = common::stringy(&data);
        let pr = ring.instance().blowup_ring();
        for sec in ring.twisted() {
            let e = ring.e(sec.id).unwrap();
            for d in pr.pieces().keys() {
                if *d + sec.age > ring.d_max() {
                    continue;
                }
                for alpha in pr.canonical_generators(*d) {
                    let lhs = ring.star(&ring.untwisted(alpha.clone()), &e).unwrap();
                    let rhs = StringyClass::single(sec.id, ring.restrict_to_sector(sec.id, &alpha).unwrap());
                    assert_eq!(lhs, rhs, "{name}: sector {}", sec.id);
                }
            }
        }
    }
}

#[test]
fn multiplication_table_shape() {
    let ring = common::stringy(&common::rootstack(2, 3));
    let (gens, table) = ring.multiplication_table(Rational::from(1)).unwrap();
    // e_1 (0), e_ζ (1/2), t e_1 (1)
    assert_eq!(gens.len(), 3);
    let twisted = gens.iter().position(|g| g.sector == s(2, 1)).unwrap();
    let cell = table.iter().find(|c| c.left == twisted && c.right == twisted).unwrap();
    assert_eq!(cell.product, minus_t_e(&ring, SectorId::TRIVIAL, 1));
    assert!(ring.multiplication_table(Rational::from(4)).is_err());
    let line = common::stringy(&common::line_plane(2, 4));
    assert!(line.multiplication_table(Rational::from(4)).is_ok());
}

#[test]
fn twisted_classes_of_the_line() {
    let ring = common::stringy(&common::line_plane(2, 4));
    let z = s(2, 1);
    assert_eq!(ring.age(z).unwrap(), Rational::new(1, 2));
    let inst = ring.instance();
    let h = parse_polynomial("h", &inst.yt_names()).unwrap();
    let x = ring.twisted_class(z, &h).unwrap();
    // h = −2t in the sector ring ℤ[h, t]/(h², h + 2t)
    let y = ring.twisted_class(z, &inst.t_poly().scale(&Int::from(-2))).unwrap();
    assert_eq!(x, y);
    let e = ring.e(z).unwrap();
    // ζ² = 1, so only 𝐞_{−1} contributes
    assert_eq!(ring.c_factors(z, z), vec![-1]);
    assert_eq!(ring.star(&e, &e).unwrap(), minus_t_e(&ring, SectorId::TRIVIAL, 1));
}

fn combo(ring: &StringyRing, gens: &[sbw_core::stringy::StringyGenerator], coeffs: &[i64], degree: Rational) -> StringyClass {
    let mut out = StringyClass::zero();
    for (g, c) in gens.iter().filter(|g| g.stringy_degree == degree).zip(coeffs) {
        out = ring.add(&out, &ring.scale(&Int::from(*c), &g.class));
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn star_is_bilinear_commutative_and_associative(
        coeffs in proptest::collection::vec(-5i64..=5, 9),
        degs in proptest::collection::vec(0usize..8, 3),
        fixture in 0usize..6,
    ) {
        let (_, data) = common::all().swap_remove(fixture);
        let (ring, gens) = generators_and_ring(&data);
        let mut levels: Vec<Rational> = gens.iter().map(|g| g.stringy_degree).collect();
        levels.dedup();
        let pick = |i: usize| levels[degs[i] % levels.len()];
        let (da, db, dc) = (pick(0), pick(1), pick(2));
        prop_assume!(da + db + dc <= ring.d_max());
        let x = combo(&ring, &gens, &coeffs[0..3], da);
        let y = combo(&ring, &gens, &coeffs[3..6], db);
        let z = combo(&ring, &gens, &coeffs[6..9], dc);
        let xy = ring.star(&x, &y).unwrap();
        prop_assert_eq!(&xy, &ring.star(&y, &x).unwrap());
        prop_assert_eq!(ring.star(&xy, &z).unwrap(), ring.star(&x, &ring.star(&y, &z).unwrap()).unwrap());
        let lhs = ring.star(&x, &ring.add(&y, &z)).unwrap();
        let rhs = ring.add(&xy, &ring.star(&x, &z).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}
