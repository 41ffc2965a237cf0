//! Acceptance criteria. Prints one PASS/FAIL line per criterion; every comparison is exact.
//!
//! Run with `cargo test -p cdgaw --test acceptance -- --nocapture` to see the lines.

use std::time::{Duration, Instant};

use cdga_core::massey::{a_massey, a_massey_element, a_massey_variation, solve_primitive, triple_from_primitives, triple_massey};
use cdga_core::ring::gysin_maps;
use cdga_core::surgery::{kernel_transfer_check, BlowupData, BlowupRing, ResolutionData, ResolutionRing};
use cdga_core::{Cdga, CohClass, CohomologyRing, Element, Field, FieldRef, Generator, Monomial, Scalar, Status, Subspace};
use cdgaw::commands::load;
use cdgaw::expr::parse_element;
use cdgaw::spec::SurgeryDecl;
use cdgaw::{parse_spec, presets, run, Command, Flags, Input, Model, Report};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const TIME_LIMIT: Duration = Duration::from_secs(10);

/// Criteria known not to hold, each with the analysis kept in the project notes.
/// The test still requires these to fail for exactly the recorded reason.
const KNOWN_FAILURES: &[(&str, &str)] = &[("2", "mismatch at (2,1): computed -1, printed 1")];

type Check = Result<String, String>;

struct Outcome {
    id: &'static str,
    title: &'static str,
    result: Check,
    elapsed: Duration,
}

fn criterion(id: &'static str, title: &'static str, f: impl FnOnce() -> Check) -> Outcome {
    let start = Instant::now();
    let mut result = f();
    let elapsed = start.elapsed();
    if elapsed > TIME_LIMIT {
        result = Err(format!("took {elapsed:?}, over the {TIME_LIMIT:?} limit"));
    }
    let line = match &result {
        Ok(d) => format!("PASS {id:<3} {title}: {d} [{} ms]", elapsed.as_millis()),
        Err(d) => format!("FAIL {id:<3} {title}: {d} [{} ms]", elapsed.as_millis()),
    };
    println!("{line}");
    Outcome { id, title, result, elapsed }
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn report(cmd: Command, input: &Input, flags: Flags) -> Result<Report, String> {
    run(cmd, input, &flags).map_err(|e| format!("{}: {e}", cmd.name()))
}

fn preset(name: &str) -> Input {
    Input::Preset(name.into())
}

fn paper_model() -> Model {
    load(&preset("paper-M")).expect("preset loads").0
}

fn scalar(f: &FieldRef, v: &Value) -> Result<Scalar, String> {
    let s = v.as_str().ok_or("expected a string")?;
    Scalar::parse(f, s).map_err(|e| e.to_string())
}

fn usizes(v: &Value) -> Vec<usize> {
    v.as_array().map(|a| a.iter().filter_map(|x| x.as_u64().map(|x| x as usize)).collect()).unwrap_or_default()
}

// ---------------------------------------------------------------- criterion 1

fn invariant_betti() -> Check {
    let r = report(Command::Betti, &preset("paper-M"), Flags { invariant: true, ..Flags::default() })?;
    let b = usizes(&r.results["betti"]);
    ensure(b.len() == 9, format!("betti vector {b:?}"))?;
    ensure([1, 3, 5, 7].iter().all(|&k| b[k] == 0), format!("odd Betti numbers {b:?}"))?;
    ensure(b[2] == 13, format!("b2 = {}", b[2]))?;
    Ok(format!("b = {b:?}"))
}

// ---------------------------------------------------------------- criterion 2

const PRINTED_TABLE: [[&str; 13]; 13] = [
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

fn printed(f: &FieldRef, s: &str) -> Scalar {
    // i = z^3 in Q(zeta_12)
    let i = Scalar::generator(f).pow(3);
    match s {
        "0" => Scalar::zero(f),
        "1" => Scalar::one(f),
        "-1" => -Scalar::one(f),
        "i" => i,
        "-i" => -i,
        _ => unreachable!(),
    }
}

fn show(f: &FieldRef, x: &Scalar) -> String {
    let i = printed(f, "i");
    if *x == i {
        "i".into()
    } else if *x == -&i {
        "-i".into()
    } else {
        x.to_string()
    }
}

fn pairing_table() -> Check {
    let model = paper_model();
    let f = model.field().clone();
    let r = report(Command::PairingTable, &preset("paper-M"), Flags { degree: Some(2), power: Some(2), ..Flags::default() })?;
    let rows = r.results["matrix"].as_array().ok_or("no matrix")?;
    ensure(rows.len() == 13, format!("{} rows", rows.len()))?;
    let m: Vec<Vec<Scalar>> = rows
        .iter()
        .map(|row| row.as_array().ok_or("bad row".to_string())?.iter().map(|v| scalar(&f, v)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;
    let pivot = m[0][1].clone();
    ensure(!pivot.is_zero(), "entry (1,2) is zero")?;
    let norm = -pivot.inv().expect("nonzero");
    let mut mismatches = Vec::new();
    for (i, row) in m.iter().enumerate() {
        ensure(row.len() == 13, "ragged matrix")?;
        for (j, x) in row.iter().enumerate() {
            let got = x * &norm;
            let want = printed(&f, PRINTED_TABLE[i][j]);
            if got != want {
                mismatches.push(format!("({},{}): computed {}, printed {}", i + 1, j + 1, show(&f, &got), PRINTED_TABLE[i][j]));
            }
        }
    }
    if mismatches.is_empty() {
        Ok("normalized table equals the printed one".into())
    } else {
        Err(format!("mismatch at {}", mismatches.join("; ")))
    }
}

// ---------------------------------------------------------------- criterion 3

fn frame_subspace(real: &Cdga, texts: &[String]) -> Result<Subspace, String> {
    let monos = real.monomials_of_degree(2);
    let vecs = texts
        .iter()
        .map(|t| parse_element(real, t).map(|p| real.coords(&p.element, &monos)).map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    Subspace::span(real.field(), monos.len(), vecs).map_err(|e| e.to_string())
}

fn lefschetz_kernel() -> Check {
    let model = paper_model();
    let (real, iso) = model.frame.clone().ok_or("preset has no frame")?;
    let r = report(Command::Lefschetz, &preset("paper-M"), Flags::default())?;
    let h2 = &r.results["base_kernels"]["H2"];
    let got: Vec<String> = h2["frame_basis"].as_array().ok_or("no kernel in degree 2")?.iter().filter_map(|v| v.as_str().map(String::from)).collect();
    let expected: Vec<String> = ["e3*e4", "e3*e7 - e4*e8", "e4*e7 + e3*e8"].iter().map(|s| s.to_string()).collect();
    let got_space = frame_subspace(&real, &got)?;
    let want_space = frame_subspace(&real, &expected)?;
    ensure(got_space == want_space, format!("kernel {got:?}"))?;
    // independent: each expected form, pulled back, is closed and dies under omega^2
    let ring = model.cohomology(true).map_err(|e| e.to_string())?;
    let w2 = {
        let w = model.omega.clone().ok_or("no omega")?;
        w.wedge(&w)
    };
    for t in &expected {
        let x = iso.inverse(&parse_element(&real, t).map_err(|e| e.to_string())?.element).map_err(|e| e.to_string())?;
        ensure(model.alg.d(&x).is_zero(), format!("{t} is not closed"))?;
        let class = ring.class_of(&x, 2).map_err(|e| e.to_string())?;
        ensure(!class.is_zero(), format!("{t} is exact"))?;
        ensure(ring.is_exact(&w2.wedge(&x), 6).map_err(|e| e.to_string())?, format!("omega^2 * {t} is not exact"))?;
    }
    Ok(format!("ker = span{{{}}}", got.join(", ")))
}

// ---------------------------------------------------------------- criterion 4

fn a_massey_paper() -> Check {
    let flags = Flags { a: Some("u1*cu1".into()), b: Some("u2*cu2,u2*cu4,cu2*u4".into()), ..Flags::default() };
    let r = report(Command::AMassey, &preset("paper-M"), flags)?;
    let model = paper_model();
    let rep = model.parse("representative", r.results["representative"].as_str().ok_or("no representative")?).map_err(|e| e.to_string())?;
    let top = model.alg.monomial(&["u1", "cu1", "u2", "cu2", "u3", "cu3", "u4", "cu4"]).map_err(|e| e.to_string())?;
    let two = Scalar::from_i64(model.field(), 2);
    ensure(rep == top.scale(&two), format!("representative {}", model.alg.render(&rep)))?;
    ensure(r.results["bound_dim"] == 0, format!("bound dimension {}", r.results["bound_dim"]))?;
    let betti = report(Command::Betti, &preset("paper-M"), Flags::default())?;
    ensure(usizes(&betti.results["betti"])[5] == 0, "H^5 is not zero")?;
    ensure(r.results["certificate"] == "NONTRIVIAL_CERTIFIED", format!("certificate {}", r.results["certificate"]))?;
    ensure(r.status.iter().any(|s| s == "NOT_FORMAL"), format!("status {:?}", r.status))?;
    Ok("[2 u1 cu1 u2 cu2 u3 cu3 u4 cu4], bound 0 (H^5 = 0), NONTRIVIAL_CERTIFIED, NOT_FORMAL".into())
}

// ---------------------------------------------------------------- criterion 5

fn blowup_lefschetz_paper() -> Check {
    let r = report(Command::Lefschetz, &preset("paper-blowup"), Flags::default())?;
    let b = &r.results["blowup"];
    let betti = usizes(&b["betti"]);
    ensure(betti.get(2) == Some(&16) && betti.get(3) == Some(&6), format!("blow-up Betti numbers {betti:?}"))?;
    let samples = b["samples"].as_array().ok_or("no samples")?;
    let ts: Vec<&str> = samples.iter().filter_map(|s| s["t"].as_str()).collect();
    ensure(ts == ["1/2", "1/3", "1/5", "1/7", "1/11"], format!("samples {ts:?}"))?;
    for s in samples {
        ensure(usizes(&s["kernel_dims"]).get(1) == Some(&0), format!("kernel at t = {} is {}", s["t"], s["kernel_dims"]))?;
    }
    let det = b["determinants"].as_array().ok_or("no determinants")?.iter().find(|d| d["degree"] == 2).ok_or("no degree-2 determinant")?;
    let model = paper_model();
    let coeffs = det["coefficients"].as_array().ok_or("no coefficients")?.iter().map(|v| scalar(model.field(), v)).collect::<Result<Vec<_>, _>>()?;
    ensure(coeffs.iter().any(|c| !c.is_zero()), "determinant polynomial is zero")?;
    ensure(b["kernel_prediction_holds"] == true, "kernel formula check fails")?;
    // independent: recompute the rank of omega~^2 on H^2 from the blow-up ring
    let model = load(&preset("paper-blowup")).map_err(|e| e.to_string())?.0;
    let ring = model.cohomology(true).map_err(|e| e.to_string())?;
    let centers = model.centers(&ring).map_err(|e| e.to_string())?;
    let blown = BlowupRing::new(BlowupData { base: ring.ring().clone(), centers }).map_err(|e| e.to_string())?;
    let w = model.omega_class(&ring).map_err(|e| e.to_string())?;
    let g = blown.ring();
    for t in ts {
        let t = Scalar::parse(model.field(), t).map_err(|e| e.to_string())?;
        let wt = blown.symplectic_class(&w, &t);
        let m = g.mul_matrix(&g.power(&wt, 2), 2);
        ensure(m.rank() == g.dim(2), format!("omega~^2 has rank {} on H^2", m.rank()))?;
    }
    Ok(format!("b2 = 16, b3 = 6, trivial kernel at t in {{1/2, 1/3, 1/5, 1/7, 1/11}}, determinant of degree {}", coeffs.len() - 1))
}

// ---------------------------------------------------------------- criterion 6

fn resolved_blowup() -> Input {
    let mut spec = parse_spec(presets::preset_text("paper-blowup").unwrap()).unwrap();
    let res = parse_spec(presets::preset_text("synthetic-resolution").unwrap()).unwrap();
    spec.surgery.extend(res.surgery.into_iter().filter(|s| matches!(s, SurgeryDecl::Exceptional { .. })));
    Input::Spec(spec)
}

fn transfer_reports() -> Check {
    let r = report(Command::Blowup, &preset("paper-blowup"), Flags::default())?;
    let centers = r.results["transfer"]["centers"].as_array().ok_or("no center checks")?;
    ensure(centers.len() == 3, "expected three centers")?;
    for c in centers {
        // 2 (|a| + (|b_i| + |b_j|)/2) = 2 (2 + 2) = 8 and 2 (k + 1) = 8
        ensure(c["lhs_doubled"] == 8 && c["rhs_doubled"] == 8 && c["degree_bound_holds"] == true, format!("center check {c}"))?;
    }
    ensure(r.results["transfer"]["transfers"] == true, "blow-up transfer fails")?;
    let combined = resolved_blowup();
    let r = report(Command::Resolve, &combined, Flags::default())?;
    ensure(r.results["transfer"]["transfers"] == true, "resolution transfer fails")?;
    let v = report(Command::Verdict, &combined, Flags::default())?;
    ensure(v.status == ["NOT_FORMAL", "LEFSCHETZ_SATISFIED"], format!("verdict {:?}", v.status))?;
    Ok("2 + (2 + 2)/2 = 4 <= k + 1 = 4 at every center; resolution transfers; NOT_FORMAL and LEFSCHETZ_SATISFIED".into())
}

// ---------------------------------------------------------------- criterion 7

fn random_scalar(rng: &mut ChaCha8Rng, f: &FieldRef) -> Scalar {
    let z = Scalar::generator(f);
    let mut acc = Scalar::zero(f);
    for p in 0..f.degree() {
        let c = Scalar::from_ratio(f, rng.gen_range(-3..=3), rng.gen_range(1..=3));
        acc = &acc + &(&c * &z.pow(p as u32));
    }
    acc
}

fn random_element(rng: &mut ChaCha8Rng, alg: &Cdga, k: u32) -> Element {
    let monos = alg.monomials_of_degree(k);
    let mut x = alg.zero();
    if monos.is_empty() {
        return x;
    }
    for _ in 0..rng.gen_range(1..=4) {
        let m = monos[rng.gen_range(0..monos.len())];
        x = &x + &alg.term(random_scalar(rng, alg.field()), m);
    }
    x
}

fn signed(x: &Element, odd: bool) -> Element {
    if odd {
        -x.clone()
    } else {
        x.clone()
    }
}

fn algebra_axioms(rng: &mut ChaCha8Rng) -> Check {
    let alg = paper_model().alg;
    let top = alg.top_degree();
    for trial in 0..1000 {
        let p = rng.gen_range(0..=top / 2);
        let q = rng.gen_range(0..=top / 2);
        let x = random_element(rng, &alg, p);
        let y = random_element(rng, &alg, q);
        ensure(alg.d(&alg.d(&x)).is_zero(), format!("trial {trial}: d^2 x != 0"))?;
        let lhs = alg.d(&x.wedge(&y));
        let rhs = &alg.d(&x).wedge(&y) + &signed(&x.wedge(&alg.d(&y)), p % 2 == 1);
        ensure(lhs == rhs, format!("trial {trial}: Leibniz fails"))?;
        ensure(x.wedge(&y) == signed(&y.wedge(&x), p * q % 2 == 1), format!("trial {trial}: graded commutativity fails"))?;
    }
    Ok("1000 random pairs".into())
}

/// Heisenberg algebra `de3 = e1 e2` times an abelian factor on `x1..xm`.
fn extension(m: usize) -> Cdga {
    let f = Field::rationals();
    let mut gens: Vec<Generator> = (1..=3).map(|i| Generator::new(format!("e{i}"), 1)).collect();
    gens.extend((1..=m).map(|i| Generator::new(format!("x{i}"), 1)));
    let alg = Cdga::free(&f, gens).unwrap();
    let mut d = vec![alg.zero(); 3 + m];
    d[2] = alg.monomial(&["e1", "e2"]).unwrap();
    alg.with_differential(d).unwrap()
}

fn small(rng: &mut ChaCha8Rng, f: &FieldRef) -> Scalar {
    Scalar::from_ratio(f, rng.gen_range(-3..=3), rng.gen_range(1..=2))
}

fn closed_one_form(rng: &mut ChaCha8Rng, alg: &Cdga) -> Element {
    let f = alg.field().clone();
    let mut x = alg.zero();
    for i in (0..alg.num_generators()).filter(|&i| i != 2) {
        x = &x + &alg.generator(i).scale(&small(rng, &f));
    }
    x
}

fn random_exact(rng: &mut ChaCha8Rng, alg: &Cdga, k: u32) -> Element {
    alg.d(&random_element(rng, alg, k - 1))
}

fn random_closed(rng: &mut ChaCha8Rng, ring: &CohomologyRing, k: u32) -> Element {
    let alg = ring.algebra();
    let f = alg.field().clone();
    let mut x = alg.zero();
    for v in ring.cocycles(k).basis() {
        x = &x + &ring.complex().element(k, v).scale(&small(rng, &f));
    }
    x
}

fn degree_of(alg: &Cdga, x: &Element, fallback: u32) -> u32 {
    match alg.degree(x) {
        cdga_core::Degree::Homogeneous(k) => k,
        _ => fallback,
    }
}

struct AInput {
    alg: Cdga,
    ring: CohomologyRing,
    a: Element,
    bs: Vec<Element>,
    b_deg: Vec<u32>,
}

fn random_a_input(rng: &mut ChaCha8Rng) -> AInput {
    let alg = extension(rng.gen_range(2..=3));
    let f = alg.field().clone();
    let e1 = alg.gen("e1").unwrap();
    let e2 = alg.gen("e2").unwrap();
    let a = loop {
        let a = &e1.wedge(&closed_one_form(rng, &alg)) + &random_exact(rng, &alg, 2);
        if !a.is_zero() {
            break a;
        }
    };
    // the product lives in degree sum |b_i| + (n - 1), which must not pass the top
    let b_deg: Vec<u32> = loop {
        let n = rng.gen_range(2..=4);
        let degs: Vec<u32> = (0..n).map(|_| if rng.gen_bool(0.4) { 1 } else { 2 }).collect();
        if degs.iter().sum::<u32>() + n as u32 - 1 <= alg.top_degree() {
            break degs;
        }
    };
    let mut bs = Vec::new();
    for &q in &b_deg {
        if q == 1 {
            let c = Scalar::from_i64(&f, rng.gen_range(1..=3));
            bs.push(&e2.scale(&c) + &e1.scale(&small(rng, &f)));
        } else {
            let b = &(&e2.wedge(&closed_one_form(rng, &alg)) + &e1.wedge(&closed_one_form(rng, &alg))) + &random_exact(rng, &alg, 2);
            bs.push(b);
        }
    }
    let ring = CohomologyRing::build(&alg, None).unwrap();
    AInput { alg, ring, a, bs, b_deg }
}

fn bar(x: &Element, deg: u32) -> Element {
    signed(x, deg % 2 == 1)
}

/// `sum_i bar(xi_1) .. bar(xi_{i-1}) b_i xi_{i+1} .. xi_n`, skipping slot `skip`.
fn c_form(alg: &Cdga, bs: &[Element], xis: &[Element], xi_deg: &[u32], skip: Option<usize>) -> Element {
    let n = bs.len();
    let mut acc = alg.zero();
    for i in (0..n).filter(|&i| Some(i) != skip) {
        let mut term = alg.one();
        for l in (0..n).filter(|&l| Some(l) != skip) {
            let factor = if l < i {
                bar(&xis[l], xi_deg[l])
            } else if l == i {
                bs[i].clone()
            } else {
                xis[l].clone()
            };
            term = term.wedge(&factor);
        }
        acc = &acc + &term;
    }
    acc
}

fn primitives(rng: &mut ChaCha8Rng, inp: &AInput) -> Result<(Vec<Element>, Vec<u32>), String> {
    let mut xis = Vec::new();
    let mut degs = Vec::new();
    for (b, &q) in inp.bs.iter().zip(&inp.b_deg) {
        let k = 2 + q;
        let xi = solve_primitive(&inp.ring, &inp.a.wedge(b), k).map_err(|e| e.to_string())?;
        xis.push(&(&xi + &random_closed(rng, &inp.ring, k - 1)) + &random_exact(rng, &inp.alg, k - 1));
        degs.push(k - 1);
    }
    Ok((xis, degs))
}

fn closedness_and_transposition(rng: &mut ChaCha8Rng) -> Check {
    for trial in 0..100 {
        let inp = random_a_input(rng);
        let alg = &inp.alg;
        let (xis, degs) = primitives(rng, &inp)?;
        for (i, xi) in xis.iter().enumerate() {
            ensure(alg.d(xi) == inp.a.wedge(&inp.bs[i]), format!("trial {trial}: bad primitive"))?;
        }
        let c = c_form(alg, &inp.bs, &xis, &degs, None);
        ensure(c == a_massey_element(alg, &inp.bs, &xis), format!("trial {trial}: representative differs from the oracle"))?;
        ensure(alg.d(&c).is_zero(), format!("trial {trial}: c is not closed"))?;
        let j = rng.gen_range(0..inp.bs.len() - 1);
        let (mut bs, mut xs, mut ds) = (inp.bs.clone(), xis.clone(), degs.clone());
        bs.swap(j, j + 1);
        xs.swap(j, j + 1);
        ds.swap(j, j + 1);
        let c_sigma = a_massey_element(alg, &bs, &xs);
        let odd = (inp.b_deg[j] + 1) * (inp.b_deg[j + 1] + 1) % 2 == 1;
        ensure(c == signed(&c_sigma, odd), format!("trial {trial}: transposition sign fails at j = {}", j + 1))?;
    }
    Ok("100 random inputs".into())
}

fn variation_identity(rng: &mut ChaCha8Rng) -> Check {
    for trial in 0..100 {
        let inp = random_a_input(rng);
        let alg = &inp.alg;
        let ring = &inp.ring;
        let a = ring.class_of(&inp.a, 2).map_err(|e| e.to_string())?;
        let bs = inp.bs.iter().zip(&inp.b_deg).map(|(b, &q)| ring.class_of(b, q)).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?;
        let res = a_massey(ring, &a, &bs).map_err(|e| e.to_string())?;
        let n = bs.len();
        let j = rng.gen_range(1..=n);
        let q = bs[j - 1].degree;
        let eta = &random_closed(rng, ring, 1 + q) + &random_exact(rng, alg, 1 + q);
        let var = a_massey_variation(ring, &res, j, &eta).map_err(|e| e.to_string())?;
        // oracle: recompute both sides from scratch
        let degs: Vec<u32> = res.bs.iter().map(|b| 1 + b.degree).collect();
        let mut varied = res.primitives.clone();
        varied[j - 1] = &varied[j - 1] + &eta;
        let diff = &c_form(alg, &res.b_elements, &varied, &degs, None) - &c_form(alg, &res.b_elements, &res.primitives, &degs, None);
        let tail: u32 = res.bs[j..].iter().map(|b| b.degree).sum();
        let odd = (q + 1) * ((n - j) as u32 + tail) % 2 == 1;
        let predicted = signed(&c_form(alg, &res.b_elements, &res.primitives, &degs, Some(j - 1)).wedge(&eta), odd);
        ensure(diff == predicted, format!("trial {trial}: c' - c differs from the closed form"))?;
        ensure(var.identity_holds && var.difference == diff, format!("trial {trial}: library variation disagrees"))?;
        ensure(degree_of(alg, &eta, 1 + q) == 1 + q, "eta has the wrong degree")?;
    }
    Ok("100 random eta".into())
}

fn triple_coset_stability(rng: &mut ChaCha8Rng) -> Check {
    for trial in 0..100 {
        let alg = extension(rng.gen_range(1..=2));
        let f = alg.field().clone();
        let ring = CohomologyRing::build(&alg, None).unwrap();
        let e1 = alg.gen("e1").unwrap();
        let e2 = alg.gen("e2").unwrap();
        let x1 = alg.gen("x1").unwrap();
        let lin = |rng: &mut ChaCha8Rng| &e1.scale(&small(rng, &f)) + &e2.scale(&small(rng, &f));
        let c1 = lin(rng);
        let c2 = lin(rng);
        let (c3, d3) = if rng.gen_bool(0.5) || !c2.coefficient(Monomial::generator(1)).is_zero() {
            (lin(rng), 1)
        } else {
            (e1.wedge(&x1), 2)
        };
        let cls = |x: &Element, k| ring.class_of(x, k).unwrap();
        let (a1, a2, a3) = (cls(&c1, 1), cls(&c2, 1), cls(&c3, d3));
        let coset = triple_massey(&ring, &a1, &a2, &a3).map_err(|e| format!("trial {trial}: {e}"))?;
        let ind = coset.indeterminacy.clone().ok_or("no indeterminacy")?;
        let (x1r, x2r, x3r) = (ring.representative(&a1), ring.representative(&a2), ring.representative(&a3));
        let a12 = &solve_primitive(&ring, &x1r.wedge(&x2r), 2).unwrap() + &random_closed(rng, &ring, 1);
        let a23 = &solve_primitive(&ring, &x2r.wedge(&x3r), 1 + d3).unwrap() + &random_closed(rng, &ring, d3);
        let a23 = &a23 + &random_exact(rng, &alg, d3);
        let other = triple_from_primitives(&x1r, &x3r, &a12, &a23, 1);
        let k = 1 + d3;
        let class = ring.class_of(&other, k).map_err(|e| format!("trial {trial}: {e}"))?;
        let delta = class.sub(&coset.representative).unwrap();
        ensure(ind.contains(&delta.coords).unwrap(), format!("trial {trial}: re-chosen primitives leave the coset"))?;
    }
    Ok("100 random re-choices".into())
}

fn heisenberg_massey() -> Check {
    let model = load(&preset("heisenberg3")).map_err(|e| e.to_string())?.0;
    let alg = &model.alg;
    let f = alg.field().clone();
    let ring = model.cohomology(false).map_err(|e| e.to_string())?;
    let e1 = alg.gen("e1").unwrap();
    let e2 = alg.gen("e2").unwrap();
    let e3 = alg.gen("e3").unwrap();
    ensure(alg.d(&e3) == e1.wedge(&e2), "unexpected Heisenberg differential")?;
    let e12 = e1.wedge(&e2);
    // brute force over primitives a12 = s e1 + t e2 of e1 e1 = 0 and a23 = e3 + u e1 + v e2
    let mut classes = Vec::new();
    let range = -2i64..=2;
    for s in range.clone() {
        for t in range.clone() {
            for u in range.clone() {
                for v in range.clone() {
                    let c = |n: i64| Scalar::from_i64(&f, n);
                    let a12 = &e1.scale(&c(s)) + &e2.scale(&c(t));
                    let a23 = &(&e3 + &e1.scale(&c(u))) + &e2.scale(&c(v));
                    // a1 a23 + a12 a3 for odd a1
                    let w = &e1.wedge(&a23) + &a12.wedge(&e2);
                    ensure(alg.d(&w).is_zero(), "oracle representative not closed")?;
                    classes.push(w);
                }
            }
        }
    }
    // exact 2-forms are the multiples of e1 e2
    let m13 = Monomial::from_indices(&[0, 2]).unwrap().1;
    let m23 = Monomial::from_indices(&[1, 2]).unwrap().1;
    let m12 = Monomial::from_indices(&[0, 1]).unwrap().1;
    let first = &classes[0];
    for w in &classes {
        let diff = w - first;
        ensure(diff == e12.scale(&diff.coefficient(m12)), "choices give different classes")?;
    }
    ensure(!first.coefficient(m13).is_zero() || !first.coefficient(m23).is_zero(), "oracle class is zero")?;
    let cl = |x: &Element| ring.class_of(x, 1).unwrap();
    let coset = triple_massey(&ring, &cl(&e1), &cl(&e1), &cl(&e2)).map_err(|e| e.to_string())?;
    ensure(coset.indeterminacy.as_ref().is_some_and(|s| s.is_zero()), "indeterminacy is not zero")?;
    ensure(coset.status == Status::NontrivialCertified, "not certified nontrivial")?;
    ensure(coset.representative == ring.class_of(first, 2).unwrap(), "class differs from the brute-force one")?;
    Ok(format!("{} defining systems, one nonzero class, zero indeterminacy", classes.len()))
}

fn resolution_properties() -> Check {
    let model = load(&preset("synthetic-resolution")).map_err(|e| e.to_string())?.0;
    let ring = model.cohomology(false).map_err(|e| e.to_string())?;
    let exceptional = model.exceptional_sets().map_err(|e| e.to_string())?;
    let res = ResolutionRing::new(ResolutionData { base: ring.ring().clone(), exceptional }).map_err(|e| e.to_string())?;
    let g = res.ring();
    let top = g.top();
    let mut triples = 0;
    for p in 0..=top {
        for q in 0..=top - p {
            for r in 0..=top - p - q {
                for i in 0..g.dim(p) {
                    let x = g.basis_class(p, i);
                    for j in 0..g.dim(q) {
                        let y = g.basis_class(q, j);
                        let xy = g.mul(&x, &y);
                        let yx = g.mul(&y, &x);
                        let expected = if p * q % 2 == 1 { xy.scale(&-Scalar::one(g.field())) } else { xy.clone() };
                        ensure(yx == expected, "graded commutativity fails")?;
                        let split = res.to_class(&res.mul(&res.split(&x), &res.split(&y)));
                        ensure(split == xy, format!("split product differs in degrees ({p}, {q})"))?;
                        for l in 0..g.dim(r) {
                            let z = g.basis_class(r, l);
                            ensure(g.mul(&xy, &z) == g.mul(&x, &g.mul(&y, &z)), format!("associativity fails in degrees ({p}, {q}, {r})"))?;
                            triples += 1;
                        }
                    }
                }
            }
        }
    }
    let w = model.omega_class(&ring).map_err(|e| e.to_string())?;
    let wr = res.symplectic_class(&w);
    let report = kernel_transfer_check(&res, &w);
    ensure(report.local.iter().all(|(_, ok)| *ok), "local Lefschetz fails")?;
    for k in 1..=top / 2 {
        let base = ring.ring().lefschetz_kernel(&w, k).dim();
        let resolved = g.lefschetz_kernel(&wr, k).dim();
        ensure(base == resolved, format!("kernel dimensions differ in degree {k}: {base} vs {resolved}"))?;
        let entry = report.entries.iter().find(|e| e.degree == k).ok_or("missing entry")?;
        ensure(entry.base_kernel_dim == base && entry.resolved_kernel_dim == resolved, "report disagrees")?;
    }
    Ok(format!("{triples} basis triples associative; kernel dimensions equal"))
}

fn gysin_adjunction() -> Check {
    let model = load(&preset("paper-blowup")).map_err(|e| e.to_string())?.0;
    let ring = model.cohomology(false).map_err(|e| e.to_string())?;
    let m = ring.ring();
    let mut pairs = 0;
    for c in model.centers(&ring).map_err(|e| e.to_string())? {
        let codim = 2 * c.codim_half;
        let n = &c.ring;
        let g = gysin_maps(m, n, &c.restriction, codim).map_err(|e| e.to_string())?;
        for q in 0..=n.top() {
            for j in 0..n.dim(q) {
                let b = n.basis_class(q, j);
                let gb = CohClass::new(q + codim, g[q as usize].mul_vec(&b.coords).unwrap());
                let p = m.top() - q - codim;
                for l in 0..m.dim(p) {
                    let a = m.basis_class(p, l);
                    let lhs = m.integrate(&m.mul(&gb, &a)).unwrap();
                    let rhs = n.integrate(&n.mul(&b, &c.restriction.apply(&a).unwrap())).unwrap();
                    ensure(lhs == rhs, format!("center {}: adjunction fails on H^{q} x H^{p}", c.name))?;
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!("{pairs} basis pairs over three tori"))
}

#[test]
fn acceptance() {
    let mut rng = ChaCha8Rng::seed_from_u64(20240611);
    let outcomes = vec![
        criterion("1", "invariant Betti numbers", invariant_betti),
        criterion("2", "pairing table", pairing_table),
        criterion("3", "Lefschetz kernel", lefschetz_kernel),
        criterion("4", "a-Massey product", a_massey_paper),
        criterion("5", "blow-up", blowup_lefschetz_paper),
        criterion("6", "transfer reports", transfer_reports),
        criterion("7a", "d^2, Leibniz, graded commutativity", || algebra_axioms(&mut rng)),
        criterion("7b", "closedness and transposition sign", || closedness_and_transposition(&mut rng)),
        criterion("7c", "variation identity", || variation_identity(&mut rng)),
        criterion("7d", "triple coset stability", || triple_coset_stability(&mut rng)),
        criterion("7e", "Heisenberg triple product", heisenberg_massey),
        criterion("7f", "resolution ring", resolution_properties),
        criterion("7g", "Gysin adjunction", gysin_adjunction),
    ];
    let total: Duration = outcomes.iter().map(|o| o.elapsed).sum();
    println!("acceptance: {} criteria in {} ms", outcomes.len(), total.as_millis());
    for o in &outcomes {
        match (KNOWN_FAILURES.iter().find(|(id, _)| *id == o.id), &o.result) {
            (None, Ok(_)) => {}
            (None, Err(e)) => panic!("criterion {} ({}) failed: {e}", o.id, o.title),
            (Some((_, why)), Err(e)) => assert_eq!(e, why, "criterion {} failed for an unrecorded reason", o.id),
            (Some(_), Ok(_)) => panic!("criterion {} now passes; drop it from KNOWN_FAILURES", o.id),
        }
    }
}
