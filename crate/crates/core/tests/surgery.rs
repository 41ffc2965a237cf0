mod common;

use cdga_core::massey::{formality_verdict, Status};
use cdga_core::ring::{gysin_maps, CohClass};
use cdga_core::scalars::Scalar;
use cdga_core::surgery::*;
use common::*;

fn paper_blowup() -> (cdga_core::cohomology::CohomologyRing, BlowupRing) {
    let ring = paper_ring();
    let f = ring.algebra().field().clone();
    let centers = paper_tori(&f)
        .into_iter()
        .map(|(name, v1, v2)| torus_center(name, &ring, &v1, &v2, &Scalar::one(&f)).unwrap())
        .collect();
    let b = BlowupRing::new(BlowupData { base: ring.ring().clone(), centers }).unwrap();
    (ring, b)
}

fn samples(f: &cdga_core::scalars::FieldRef) -> Vec<Scalar> {
    DEFAULT_T_SAMPLES.iter().map(|(p, q)| Scalar::from_ratio(f, *p, *q)).collect()
}

#[test]
fn subtorus_dual_pairs_like_evaluation() {
    let ring = paper_ring();
    let alg = ring.algebra();
    let f = alg.field().clone();
    for (_, v1, v2) in paper_tori(&f) {
        let pd = pd_of_subtorus(&ring, &v1, &v2, &Scalar::one(&f)).unwrap();
        for i in 0..ring.betti(2) {
            let a = ring.ring().basis_class(2, i);
            let lhs = ring.ring().integrate(&ring.cup(&pd, &a)).unwrap();
            let rhs = alg.evaluate_on_plane(&ring.basis_representative(2, i), &v1, &v2).unwrap();
            assert_eq!(lhs, rhs);
        }
        let three = Scalar::from_i64(&f, 3);
        let pd3 = pd_of_subtorus(&ring, &v1, &v2, &three).unwrap();
        assert_eq!(pd3, pd.scale(&three));
    }
}

#[test]
fn gysin_adjunction_on_basis_pairs() {
    let ring = paper_ring();
    let m = ring.ring();
    let f = ring.algebra().field().clone();
    for (_, v1, v2) in paper_tori(&f) {
        let r = plane_restriction(&ring, &v1, &v2).unwrap();
        let t = torus_ring(&f, &Scalar::one(&f));
        let g = gysin_maps(m, &t, &r, 6).unwrap();
        for q in 0..=2u32 {
            for j in 0..t.dim(q) {
                let b = t.basis_class(q, j);
                let gb = CohClass::new(q + 6, g[q as usize].mul_vec(&b.coords).unwrap());
                for l in 0..m.dim(2 - q) {
                    let a = m.basis_class(2 - q, l);
                    let lhs = m.integrate(&m.mul(&gb, &a)).unwrap();
                    let rhs = t.integrate(&t.mul(&b, &r.apply(&a).unwrap())).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}

#[test]
fn each_torus_hits_one_kernel_direction() {
    let ring = paper_ring();
    let alg = ring.algebra();
    let f = alg.field().clone();
    let w = omega(&ring);
    let ker = ring.ring().lefschetz_kernel(&w, 2);
    assert_eq!(ker.dim(), 3);
    // kernel classes e34, e37 - e48, e47 + e38 written in the complex frame
    let i = i_unit(&f);
    let two_i = &i * &Scalar::from_i64(&f, 2);
    let half = Scalar::from_ratio(&f, 1, 2);
    let e34 = mono(alg, &["u2", "cu2"]).scale(&two_i.inv().unwrap());
    let p = mono(alg, &["u2", "cu4"]);
    let q = mono(alg, &["cu2", "u4"]);
    let e37_48 = (&p + &q).scale(&half);
    let e47_38 = (&q - &p).scale(&(&half * &i.inv().unwrap()));
    let kernel = [e34, e37_48, e47_38];
    for k in &kernel {
        assert!(ker.contains(&ring.class_of(k, 2).unwrap().coords).unwrap());
    }
    for (ti, (_, v1, v2)) in paper_tori(&f).iter().enumerate() {
        for (ki, k) in kernel.iter().enumerate() {
            let v = alg.evaluate_on_plane(k, v1, v2).unwrap();
            assert_eq!(v.is_zero(), ti != ki, "torus {ti} against kernel class {ki}");
        }
    }
}

#[test]
fn blowup_dimensions() {
    let (ring, b) = paper_blowup();
    let base = ring.betti_numbers();
    // direct enumeration: H^d(M) plus H^{d-2j}(T) for each torus and j = 1, 2
    let torus = [1usize, 2, 1];
    let expected: Vec<usize> = (0..=8)
        .map(|d: usize| {
            let mut n = base[d];
            for j in 1..=2 {
                if d >= 2 * j && d - 2 * j <= 2 {
                    n += 3 * torus[d - 2 * j];
                }
            }
            n
        })
        .collect();
    assert_eq!(b.betti_numbers(), expected);
    assert_eq!(b.dim(2), 16);
    assert_eq!(b.dim(3), 6);
    assert!(b.ring().check_poincare_duality().is_ok());
}

#[test]
fn sigma_cubed_is_minus_pd() {
    let (_, b) = paper_blowup();
    let r = b.ring();
    for c in 0..3 {
        let s = b.sigma(c);
        let s3 = r.power(&s, 3);
        let pd = b.embed_base(&b.poincare_duals()[c]);
        assert_eq!(s3, pd.scale(&-Scalar::one(r.field())));
    }
    // different centers annihilate each other
    assert!(r.mul(&b.sigma(0), &b.sigma(1)).is_zero());
}

#[test]
fn pullback_is_ring_map() {
    let (ring, b) = paper_blowup();
    let m = ring.ring();
    for i in 0..m.dim(2) {
        for j in 0..m.dim(2) {
            let x = m.basis_class(2, i);
            let y = m.basis_class(2, j);
            assert_eq!(b.ring().mul(&b.embed_base(&x), &b.embed_base(&y)), b.embed_base(&m.mul(&x, &y)));
        }
    }
}

#[test]
fn blowup_lefschetz_paper() {
    let (ring, b) = paper_blowup();
    let f = ring.algebra().field().clone();
    let w = omega(&ring);
    let rep = blowup_lefschetz(&b, &w, &samples(&f));
    assert!(rep.satisfied);
    assert!(rep.stable);
    assert!(rep.surface_centers);
    assert!(rep.prediction_holds);
    assert!(rep.base_kernel_at_zero);
    for s in &rep.samples {
        assert!(s.kernels[1].is_zero());
    }
    let d2 = rep.determinants.iter().find(|d| d.degree == 2).unwrap();
    assert!(d2.nonzero);
    // before the blow-up the degree-2 kernel is 3-dimensional
    assert_eq!(ring.ring().lefschetz_kernel(&w, 2).dim(), 3);
}

#[test]
fn blowup_with_fewer_tori_keeps_kernel() {
    let ring = paper_ring();
    let f = ring.algebra().field().clone();
    let (name, v1, v2) = paper_tori(&f).remove(0);
    let c = torus_center(name, &ring, &v1, &v2, &Scalar::one(&f)).unwrap();
    let b = BlowupRing::new(BlowupData { base: ring.ring().clone(), centers: vec![c] }).unwrap();
    let rep = blowup_lefschetz(&b, &omega(&ring), &samples(&f));
    assert!(!rep.satisfied);
    assert!(rep.prediction_holds);
    assert_eq!(rep.generic_kernel_dims.iter().find(|(d, _)| *d == 2).unwrap().1, 2);
}

#[test]
fn supplied_pd_must_agree() {
    let ring = paper_ring();
    let f = ring.algebra().field().clone();
    let (name, v1, v2) = paper_tori(&f).remove(0);
    let mut c = torus_center(name, &ring, &v1, &v2, &Scalar::one(&f)).unwrap();
    let pd = pd_of_subtorus(&ring, &v1, &v2, &Scalar::one(&f)).unwrap();
    c.pd = Some(pd.scale(&Scalar::from_i64(&f, 2)));
    let err = BlowupRing::new(BlowupData { base: ring.ring().clone(), centers: vec![c.clone()] }).unwrap_err();
    assert!(matches!(err, SurgeryError::InconsistentData(_)));
    c.pd = Some(pd);
    assert!(BlowupRing::new(BlowupData { base: ring.ring().clone(), centers: vec![c] }).is_ok());
}

#[test]
fn blowup_transfer_paper_case() {
    let (ring, b) = paper_blowup();
    let prod = paper_product(&ring);
    let rep = blowup_transfer_hypothesis(b.data(), &prod, &[]);
    assert!(rep.transfers);
    assert!(rep.centers.iter().all(|c| c.worst == 8 && c.bound == 8));

    let mut big = prod.clone();
    big.a = CohClass::new(4, vec![]);
    assert!(!blowup_transfer_hypothesis(b.data(), &big, &[]).transfers);

    let mut unknown = prod.clone();
    unknown.certificate = Status::Unknown;
    assert!(!blowup_transfer_hypothesis(b.data(), &unknown, &[]).transfers);

    // the center clause needs k > 5; here k = 3
    let rep = blowup_transfer_hypothesis(b.data(), &big, &[Some(&prod), Some(&prod), Some(&prod)]);
    assert!(rep.centers.iter().all(|c| !c.center_clause_holds));
}

#[test]
fn resolution_products() {
    let ring = paper_ring();
    let f = ring.algebra().field().clone();
    let data = ResolutionData { base: ring.ring().clone(), exceptional: vec![projective_exceptional(&f, "E", 1)] };
    let r = ResolutionRing::new(data).unwrap();
    assert!(r.warnings.is_empty());
    let x = r.embed_local(0, &CohClass::new(2, vec![Scalar::one(&f)]));
    let x3 = r.embed_local(0, &CohClass::new(6, vec![Scalar::one(&f)]));
    let top = r.ring().mul(&x, &x3);
    assert_eq!(r.ring().integrate(&top).unwrap(), Scalar::one(&f));
    assert_eq!(r.split(&top).base, ring.ring().basis_class(8, 0));
    // mixed base/local products vanish in positive degree
    let a = r.embed_base(&ring.ring().basis_class(2, 0));
    assert!(r.ring().mul(&a, &x).is_zero());
    // base classes multiply as in M
    let b = ring.ring().basis_class(2, 1);
    assert_eq!(r.ring().mul(&a, &r.embed_base(&b)), r.embed_base(&ring.ring().mul(&ring.ring().basis_class(2, 0), &b)));
    assert!(r.ring().check_poincare_duality().is_ok());
}

#[test]
fn local_lefschetz_checks() {
    let ring = paper_ring();
    let f = ring.algebra().field().clone();
    let good = ResolutionData { base: ring.ring().clone(), exceptional: vec![projective_exceptional(&f, "E", 1)] };
    assert!(local_lefschetz(&good, 0));
    let bad = ResolutionData { base: ring.ring().clone(), exceptional: vec![projective_exceptional(&f, "E", 0)] };
    assert!(!local_lefschetz(&bad, 0));
}

#[test]
fn degenerate_local_pairing_rejected() {
    let ring = paper_ring();
    let f = ring.algebra().field().clone();
    let mut e = projective_exceptional(&f, "E", 1);
    e.pairing[4].set(0, 0, Scalar::zero(&f));
    let err = ResolutionRing::new(ResolutionData { base: ring.ring().clone(), exceptional: vec![e] }).unwrap_err();
    assert_eq!(err, SurgeryError::DegenerateF { name: "E".into(), degree: 4 });
}

#[test]
fn kernels_survive_resolution() {
    let ring = paper_ring();
    let f = ring.algebra().field().clone();
    let ex = (0..2).map(|p| projective_exceptional(&f, &format!("E{p}"), 1)).collect();
    let r = ResolutionRing::new(ResolutionData { base: ring.ring().clone(), exceptional: ex }).unwrap();
    let rep = kernel_transfer_check(&r, &omega(&ring));
    assert!(rep.all_local && rep.consistent);
    assert_eq!(rep.entries[1].resolved_kernel_dim, 3);
    assert_eq!(rep.biconditional_holds, Some(true));
    assert!(!rep.resolved.satisfied);
}

#[test]
fn resolution_transfer() {
    let ring = paper_ring();
    let prod = paper_product(&ring);
    assert!(resolution_transfer_report(&prod).transfers);
    let mut p = prod.clone();
    p.certificate = Status::Unknown;
    assert!(!resolution_transfer_report(&p).transfers);
    p.certificate = Status::TrivialCertified;
    assert!(!resolution_transfer_report(&p).transfers);
}

#[test]
fn resolved_blowup_is_a_nonformal_lefschetz_model() {
    let (ring, b) = paper_blowup();
    let f = ring.algebra().field().clone();
    let w = omega(&ring);
    let prod = paper_product(&ring);
    let blown = blowup_transfer_hypothesis(b.data(), &prod, &[]);
    let t = Scalar::from_ratio(&f, 1, 2);
    let wt = b.symplectic_class(&w, &t);
    let r = ResolutionRing::new(ResolutionData { base: b.ring().clone(), exceptional: vec![projective_exceptional(&f, "E", 1)] }).unwrap();
    let rep = kernel_transfer_check(&r, &wt);
    assert!(rep.resolved.satisfied);
    let res = resolution_transfer_report(&prod);
    assert!(blown.transfers && res.transfers);
    let status = if blown.transfers && res.transfers { prod.certificate } else { Status::Unknown };
    assert_eq!(formality_verdict(&[status]).as_str(), "NOT_FORMAL");
}

fn projective(f: &cdga_core::scalars::FieldRef, n: usize) -> cdga_core::ring::GradedRing {
    let dims: Vec<usize> = (0..=2 * n).map(|d| usize::from(d % 2 == 0)).collect();
    let labels = (0..=2 * n).map(|d| if d % 2 == 0 { vec![format!("H^{}", d / 2)] } else { vec![] }).collect();
    cdga_core::ring::GradedRing::from_products(f, dims, labels, vec![Scalar::one(f)], |_, _, _, _| vec![Scalar::one(f)])
}

#[test]
fn blowup_of_projective_space_along_a_line() {
    use cdga_core::linalg::Matrix;
    use cdga_core::ring::GradedMap;
    let f = cdga_core::scalars::Field::rationals();
    let m = projective(&f, 3);
    let n = projective(&f, 1);
    let maps = (0..=6)
        .map(|d| match d {
            0 | 2 => Matrix::identity(&f, 1),
            _ => Matrix::zeros(&f, n.dim(d), m.dim(d)),
        })
        .collect();
    let c1 = CohClass::new(2, vec![Scalar::from_i64(&f, 2)]);
    let center = Center { name: "L".into(), ring: n, restriction: GradedMap { maps }, codim_half: 2, chern: vec![c1], pd: None };
    let b = BlowupRing::new(BlowupData { base: m.clone(), centers: vec![center] }).unwrap();
    assert_eq!(b.betti_numbers(), vec![1, 0, 2, 0, 2, 0, 1]);
    assert_eq!(b.poincare_duals()[0], m.basis_class(4, 0));
    let r = b.ring();
    assert!(r.check_poincare_duality().is_ok());
    // sigma^2 = -H^2 - 2 h sigma, and the top self-intersection sigma^3 = -c_1 = -2 on the line
    let s = b.sigma(0);
    let h = b.embed_base(&m.basis_class(2, 0));
    let s2 = r.mul(&s, &s);
    let hs = r.mul(&h, &s);
    let expect = b.embed_base(&m.basis_class(4, 0)).scale(&-Scalar::one(&f)).add(&hs.scale(&Scalar::from_i64(&f, -2))).unwrap();
    assert_eq!(s2, expect);
    assert_eq!(r.integrate(&r.power(&s, 3)).unwrap(), Scalar::from_i64(&f, 2));
}

#[test]
fn blowup_of_projective_space_at_a_point() {
    use cdga_core::linalg::Matrix;
    use cdga_core::ring::GradedMap;
    let f = cdga_core::scalars::Field::rationals();
    let m = projective(&f, 3);
    let pt = cdga_core::ring::GradedRing::from_products(&f, vec![1], vec![vec!["1".into()]], vec![Scalar::one(&f)], |_, _, _, _| vec![Scalar::one(&f)]);
    let maps = (0..=6).map(|d| if d == 0 { Matrix::identity(&f, 1) } else { Matrix::zeros(&f, 0, 1 - d % 2) }).collect();
    let center = Center { name: "p".into(), ring: pt, restriction: GradedMap { maps }, codim_half: 3, chern: vec![], pd: None };
    let b = BlowupRing::new(BlowupData { base: m, centers: vec![center] }).unwrap();
    assert_eq!(b.betti_numbers(), vec![1, 0, 2, 0, 2, 0, 1]);
    let s = b.sigma(0);
    assert_eq!(b.ring().integrate(&b.ring().power(&s, 3)).unwrap(), -Scalar::one(&f));
}
