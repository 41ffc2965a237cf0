#![allow(dead_code)]

use cdga_core::algebra::{Cdga, Element, Generator};
use cdga_core::cohomology::CohomologyRing;
use cdga_core::ring::CohClass;
use cdga_core::scalars::{Field, FieldRef, Scalar};
use cdga_core::symmetry::{invariant_subcomplex, GroupAction};

pub fn i_unit(f: &FieldRef) -> Scalar {
    Scalar::generator(f).pow(3)
}

pub fn sqrt3(f: &FieldRef) -> Scalar {
    &Scalar::from_i64(f, 2) * &Scalar::generator(f) - Scalar::generator(f).pow(3)
}

/// The complex Heisenberg x C algebra on u1, cu1, ..., u4, cu4 with du3 = u1 u2.
pub fn paper_algebra() -> Cdga {
    let f = Field::default_field();
    let weights = [1, 1, 2, 1];
    let mut gens = Vec::new();
    for j in 1..=4 {
        gens.push(Generator::new(format!("u{j}"), 1).with_weight(weights[j - 1]).with_conjugate(format!("cu{j}")));
        gens.push(Generator::new(format!("cu{j}"), 1).with_weight(-weights[j - 1]).with_conjugate(format!("u{j}")));
    }
    let free = Cdga::free(&f, gens).unwrap();
    let mut d = vec![free.zero(); 8];
    d[4] = free.monomial(&["u1", "u2"]).unwrap();
    d[5] = free.monomial(&["cu1", "cu2"]).unwrap();
    free.with_differential(d).unwrap()
}

pub fn mono(alg: &Cdga, names: &[&str]) -> Element {
    alg.monomial(names).unwrap()
}

pub const PAPER_H2: [[&str; 2]; 13] = [
    ["u1", "cu1"],
    ["u4", "cu4"],
    ["u2", "u3"],
    ["cu2", "cu3"],
    ["cu1", "u2"],
    ["u1", "u3"],
    ["u1", "cu2"],
    ["cu1", "cu3"],
    ["u1", "cu4"],
    ["cu1", "u4"],
    ["u2", "cu2"],
    ["u2", "cu4"],
    ["cu2", "u4"],
];

/// Invariant cohomology with the H^2 basis in the printed order.
pub fn paper_ring() -> CohomologyRing {
    let alg = paper_algebra();
    let act = GroupAction::diagonal_from_generators(&alg, 3);
    let sub = invariant_subcomplex(&alg, &act).unwrap();
    let ring = CohomologyRing::build(&alg, Some(&sub)).unwrap();
    let reps = PAPER_H2.iter().map(|p| mono(&alg, p)).collect();
    let labels = PAPER_H2.iter().map(|p| format!("{}*{}", p[0], p[1])).collect();
    ring.with_basis(2, reps, labels).unwrap()
}

pub fn omega(ring: &CohomologyRing) -> CohClass {
    let alg = ring.algebra();
    let i = i_unit(alg.field());
    let w = &(&(&mono(alg, &["u1", "cu1"]).scale(&i) + &mono(alg, &["u2", "u3"])) + &mono(alg, &["cu2", "cu3"]))
        + &mono(alg, &["u4", "cu4"]).scale(&i);
    ring.class_of(&w, 2).unwrap()
}

/// Values of u1, cu1, ..., u4, cu4 on the real vector `sum c_a e_a` (`a` is 1-based),
/// for the frame u1 = e1 + i e2, u2 = e3 - i e4, u3 = e5 - i e6, u4 = e7 + i e8.
pub fn frame_vector(f: &FieldRef, entries: &[(usize, Scalar)]) -> Vec<Scalar> {
    let mut e = vec![Scalar::zero(f); 9];
    for (a, c) in entries {
        e[*a] = &e[*a] + c;
    }
    let i = i_unit(f);
    let signs = [1i64, -1, -1, 1];
    let mut out = Vec::new();
    for j in 1..=4 {
        let im = &(&e[2 * j] * &i) * &Scalar::from_i64(f, signs[j - 1]);
        out.push(&e[2 * j - 1] + &im);
        out.push(&e[2 * j - 1] - &im);
    }
    out
}

/// The three tori, as pairs of frame vectors.
pub fn paper_tori(f: &FieldRef) -> Vec<(String, Vec<Scalar>, Vec<Scalar>)> {
    let one = || Scalar::one(f);
    vec![
        ("T1".into(), frame_vector(f, &[(3, one()), (7, one())]), frame_vector(f, &[(4, one()), (8, one())])),
        ("T2".into(), frame_vector(f, &[(3, one()), (8, sqrt3(f))]), frame_vector(f, &[(7, one())])),
        ("T3".into(), frame_vector(f, &[(3, one()), (7, one())]), frame_vector(f, &[(8, one())])),
    ]
}

pub fn paper_product(ring: &CohomologyRing) -> cdga_core::massey::AMasseyResult {
    let alg = ring.algebra();
    let cls = |n: [&str; 2]| ring.class_of(&mono(alg, &n), 2).unwrap();
    let a = cls(["u1", "cu1"]);
    let bs = vec![cls(["u2", "cu2"]), cls(["u2", "cu4"]), cls(["cu2", "u4"])];
    cdga_core::massey::a_massey(ring, &a, &bs).unwrap()
}

/// Truncated polynomial ring on `x` in degree 2 with `x^4 = 0`, graded up to 8, with
/// `F(x^a, x^{4-a}) = 1` and omega = `w * x`.
pub fn projective_exceptional(f: &FieldRef, name: &str, w: i64) -> cdga_core::surgery::ExceptionalSet {
    use cdga_core::linalg::Matrix;
    use cdga_core::ring::GradedRing;
    let dims = vec![1, 0, 1, 0, 1, 0, 1, 0, 0];
    let labels = (0..=8).map(|d| if d % 2 == 0 && d < 8 { vec![if d == 0 { "1".to_string() } else { format!("x^{}", d / 2) }] } else { vec![] }).collect();
    let ring = GradedRing::from_products(f, dims.clone(), labels, vec![Scalar::one(f)], |_, _, _, _| vec![Scalar::one(f)]);
    let pairing = (0..=8)
        .map(|k: usize| {
            let mut m = Matrix::zeros(f, dims[k], dims[8 - k]);
            if k > 0 && k < 8 && dims[k] == 1 {
                m.set(0, 0, Scalar::one(f));
            }
            m
        })
        .collect();
    cdga_core::surgery::ExceptionalSet { name: name.into(), ring, pairing, omega: CohClass::new(2, vec![Scalar::from_i64(f, w)]) }
}

/// The printed pairing table, row by row, in the order of `PAPER_H2`.
pub const PRINTED_TABLE: [[&str; 13]; 13] = [
    ["0", "-1", "-i", "-i", "0", "0", "0", "0", "0", "0", "0", "0", "0"],
    ["1", "0", "-i", "-i", "0", "0", "0", "0", "0", "0", "0", "0", "0"],
    ["-i", "-i", "0", "1", "0", "0", "0", "0", "0", "0", "0", "0", "0"],
    ["-i", "-i", "1", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0"],
    ["0", "0", "0", "0", "0", "-i", "0", "0", "0", "0", "0", "0", "0"],
    ["0", "0", "0", "0", "-i", "0", "0", "0", "0", "0", "0", "0", "0"],
    ["0", "0", "0", "0", "0", "0", "0", "i", "0", "0", "0", "0", "0"],
    ["0", "0", "0", "0", "0", "0", "i", "0", "0", "0", "0", "0", "0"],
    ["0", "0", "0", "0", "0", "0", "0", "0", "0", "-1", "0", "0", "0"],
    ["0", "0", "0", "0", "0", "0", "0", "0", "-1", "0", "0", "0", "0"],
    ["0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0"],
    ["0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0"],
    ["0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0"],
];

pub fn table_entry(f: &FieldRef, s: &str) -> Scalar {
    match s {
        "0" => Scalar::zero(f),
        "1" => Scalar::one(f),
        "-1" => -Scalar::one(f),
        "i" => i_unit(f),
        "-i" => -i_unit(f),
        _ => panic!("unexpected entry {s}"),
    }
}

/// The omega^2 pairing on H^2, normalized so that entry (0, 1) is -1.
pub fn normalized_pairing(ring: &CohomologyRing) -> Vec<Vec<Scalar>> {
    let w = omega(ring);
    let m = ring.ring().pairing_matrix(2, Some(&w), 2).unwrap();
    let norm = -m.get(0, 1).inv().unwrap();
    (0..13).map(|i| (0..13).map(|j| m.get(i, j) * &norm).collect()).collect()
}

/// Real frame e1..e8 and the substitution u1 = e1 + i e2, u2 = e3 - i e4, u3 = e5 - i e6, u4 = e7 + i e8.
pub fn real_frame(alg: &Cdga) -> (Cdga, cdga_core::algebra::CdgaIsomorphism) {
    let f = alg.field().clone();
    let gens = (1..=8).map(|a| Generator::new(format!("e{a}"), 1)).collect();
    cdga_core::algebra::CdgaIsomorphism::transport(alg, gens, |r| {
        let i = i_unit(&f);
        let signs = [1i64, -1, -1, 1];
        let mut out = Vec::new();
        for j in 0..4 {
            let re = r.generator(2 * j);
            let im = r.generator(2 * j + 1).scale(&(&i * &Scalar::from_i64(&f, signs[j])));
            out.push(&re + &im);
            out.push(&re - &im);
        }
        Ok(out)
    })
    .unwrap()
}
