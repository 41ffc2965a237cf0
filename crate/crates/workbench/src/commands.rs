//! Command dispatch. Each command builds the model, delegates to `cdga-core` and fills
//! a [`Report`].

use std::str::FromStr;

use cdga_core::massey::{a_massey, formality_verdict, higher_massey, triple_massey, AMasseyResult, Status, Strategy};
use cdga_core::ring::{CohClass, GradedRing, LefschetzReport};
use cdga_core::surgery::{
    blowup_lefschetz, blowup_transfer_hypothesis, kernel_transfer_check, resolution_transfer_report, BlowupData, BlowupRing,
    ResolutionData, ResolutionRing, DEFAULT_T_SAMPLES,
};
use cdga_core::{CohomologyRing, Element, Scalar, Subspace};
use serde_json::{json, Value};

use crate::presets::preset_text;
use crate::report::{digest, Report};
use crate::spec::{parse_spec, render_spec, Model, SpecFile};
use crate::WorkbenchError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    Betti,
    Cohomology,
    PairingTable,
    Lefschetz,
    Massey,
    AMassey,
    Blowup,
    Resolve,
    Verdict,
}

impl Command {
    pub const ALL: [Command; 10] = [
        Command::Validate,
        Command::Betti,
        Command::Cohomology,
        Command::PairingTable,
        Command::Lefschetz,
        Command::Massey,
        Command::AMassey,
        Command::Blowup,
        Command::Resolve,
        Command::Verdict,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Betti => "betti",
            Command::Cohomology => "cohomology",
            Command::PairingTable => "pairing-table",
            Command::Lefschetz => "lefschetz",
            Command::Massey => "massey",
            Command::AMassey => "amassey",
            Command::Blowup => "blowup",
            Command::Resolve => "resolve",
            Command::Verdict => "verdict",
        }
    }
}

impl FromStr for Command {
    type Err = WorkbenchError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| WorkbenchError::Other(format!("unknown command `{s}`")))
    }
}

#[derive(Clone, Debug)]
pub enum Input {
    Preset(String),
    File { path: String, text: String },
    Spec(SpecFile),
}

#[derive(Clone, Debug, Default)]
pub struct Flags {
    pub invariant: bool,
    pub degree: Option<u32>,
    pub power: Option<u32>,
    pub t: Option<String>,
    /// a-Massey inputs: `a` and a comma-separated list of `b_i`.
    pub a: Option<String>,
    pub b: Option<String>,
    /// Comma-separated classes for `massey`.
    pub classes: Option<String>,
}

impl Flags {
    fn echo(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.invariant {
            v.push("--invariant".to_string());
        }
        let mut opt = |name: &str, x: Option<String>| {
            if let Some(x) = x {
                v.push(format!("--{name} {x}"));
            }
        };
        opt("degree", self.degree.map(|d| d.to_string()));
        opt("power", self.power.map(|d| d.to_string()));
        opt("t", self.t.clone());
        opt("a", self.a.clone());
        opt("b", self.b.clone());
        opt("classes", self.classes.clone());
        v
    }
}

pub fn load(input: &Input) -> Result<(Model, String), WorkbenchError> {
    match input {
        Input::Preset(name) => {
            let text = preset_text(name)?;
            Ok((Model::build(parse_spec(text)?, Some(text))?, format!("preset {name}")))
        }
        Input::File { path, text } => Ok((Model::build(parse_spec(text)?, Some(text))?, path.clone())),
        Input::Spec(spec) => Ok((Model::build(spec.clone(), None)?, "inline spec".to_string())),
    }
}

pub fn run(cmd: Command, input: &Input, flags: &Flags) -> Result<Report, WorkbenchError> {
    let (model, source) = load(input)?;
    let canonical = render_spec(&model.spec);
    let echo = flags.echo();
    let dg = digest(&[&canonical, cmd.name(), &echo.join("\n")]);
    let mut r = Report::new(cmd.name(), &source, echo, dg);
    r.warnings.extend(model.warnings.iter().cloned());
    match cmd {
        Command::Validate => validate(&model, &mut r)?,
        Command::Betti => betti(&model, flags, &mut r)?,
        Command::Cohomology => cohomology(&model, flags, &mut r)?,
        Command::PairingTable => pairing_table(&model, flags, &mut r)?,
        Command::Lefschetz => lefschetz(&model, flags, &mut r)?,
        Command::Massey => massey(&model, flags, &mut r)?,
        Command::AMassey => amassey(&model, flags, &mut r)?,
        Command::Blowup => blowup(&model, flags, &mut r)?,
        Command::Resolve => resolve(&model, flags, &mut r)?,
        Command::Verdict => verdict(&model, flags, &mut r)?,
    }
    Ok(r)
}

fn s(x: &Scalar) -> Value {
    Value::String(x.to_string())
}

fn coords(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(s).collect())
}

fn ring_for(model: &Model, flags: &Flags, r: &mut Report) -> Result<CohomologyRing, WorkbenchError> {
    let invariant = flags.invariant || model.spec.quotient;
    if invariant {
        r.step(format!("invariant subcomplex of the order-{} action", model.action.as_ref().map_or(1, |a| a.order())));
    }
    let ring = model.cohomology(flags.invariant)?;
    r.step("cohomology ring: cocycles modulo boundaries, canonical representatives");
    if !model.spec.bases.is_empty() && (invariant || model.action.is_none()) {
        r.step("preferred bases installed from the spec");
    }
    Ok(ring)
}

fn validate(model: &Model, r: &mut Report) -> Result<(), WorkbenchError> {
    let alg = &model.alg;
    r.set("generators", Value::Array(alg.generators().iter().map(|g| json!(format!("{} (degree {})", g.name, g.degree))).collect()));
    let d: serde_json::Map<String, Value> =
        (0..alg.num_generators()).map(|i| (format!("d{}", alg.generators()[i].name), json!(alg.render(alg.differential_of_generator(i))))).collect();
    r.set("differential", Value::Object(d));
    r.set("d_squared_zero", true);
    r.step("d extended by the Leibniz rule; d^2 = 0 checked on every generator");
    if let Some(act) = &model.action {
        r.set("action_order", act.order());
        r.set("action_valid", true);
        r.step("group action commutes with d");
    }
    if let Some(w) = &model.omega {
        r.set("symplectic", alg.render(w));
        r.set("symplectic_closed", true);
    }
    if let Some((real, _)) = &model.frame {
        let d: serde_json::Map<String, Value> = (0..real.num_generators())
            .map(|i| (format!("d{}", real.generators()[i].name), json!(real.render(real.differential_of_generator(i)))))
            .collect();
        r.set("frame_differential", Value::Object(d));
        r.step("differential transported to the real frame");
    }
    r.status.push("VALID".into());
    Ok(())
}

fn betti(model: &Model, flags: &Flags, r: &mut Report) -> Result<(), WorkbenchError> {
    let ring = ring_for(model, flags, r)?;
    let b = ring.betti_numbers();
    let euler: i64 = b.iter().enumerate().map(|(k, x)| if k % 2 == 0 { *x as i64 } else { -(*x as i64) }).sum();
    r.set("betti", b);
    r.set("euler_characteristic", euler);
    r.status.push("OK".into());
    Ok(())
}

fn frame_render(model: &Model, x: &Element) -> Option<String> {
    model.frame.as_ref().map(|(real, iso)| real.render(&iso.forward(x).expect("model element")))
}

fn cohomology(model: &Model, flags: &Flags, r: &mut Report) -> Result<(), WorkbenchError> {
    let ring = ring_for(model, flags, r)?;
    let degrees: Vec<u32> = match flags.degree {
        Some(k) if k <= ring.top() => vec![k],
        Some(k) => return Err(WorkbenchError::Validation(format!("degree {k} exceeds the top degree {}", ring.top()))),
        None => (0..=ring.top()).collect(),
    };
    let mut out = serde_json::Map::new();
    for k in degrees {
        let reps: Vec<Value> = (0..ring.betti(k))
            .map(|i| {
                let x = ring.basis_representative(k, i);
                let mut o = json!({ "label": ring.labels(k)[i], "representative": model.alg.render(&x) });
                if let Some(fr) = frame_render(model, &x) {
                    o["frame"] = json!(fr);
                }
                o
            })
            .collect();
        out.insert(format!("H{k}"), Value::Array(reps));
    }
    r.set("betti", ring.betti_numbers());
    r.set("basis", Value::Object(out));
    r.status.push("OK".into());
    Ok(())
}

fn pairing_table(model: &Model, flags: &Flags, r: &mut Report) -> Result<(), WorkbenchError> {
    let ring = ring_for(model, flags, r)?;
    let w = model.omega_class(&ring)?;
    let n = ring.top() / 2;
    let k = flags.degree.unwrap_or(2);
    let p = flags.power.unwrap_or_else(|| n.saturating_sub(k));
    let m = ring.ring().pairing_matrix(k, Some(&w), p).map_err(|e| WorkbenchError::Validation(e.to_string()))?;
    r.step(format!("pairing B(x, y) = integral of x * y * omega^{p} on H^{k} x H^{}", ring.top() - k - 2 * p));
    let rows: Vec<Value> = (0..m.rows()).map(|i| coords(m.row(i))).collect();
    r.set("row_labels", ring.labels(k).to_vec());
    r.set("column_labels", ring.labels(ring.top() - k - 2 * p).to_vec());
    r.set("matrix", Value::Array(rows));
    r.set("rank", m.rank());
    let symmetric = m.rows() == m.cols() && m == m.transpose();
    r.set("symmetric", symmetric);
    r.status.push("OK".into());
    Ok(())
}

fn samples(model: &Model, flags: &Flags) -> Result<Vec<Scalar>, WorkbenchError> {
    let f = model.field();
    match &flags.t {
        Some(t) => {
            let v = Scalar::parse(f, t).map_err(|e| WorkbenchError::Parse { context: "--t".into(), line: 1, column: 1, message: e.to_string() })?;
            if v.is_zero() {
                return Err(WorkbenchError::Validation("--t must be nonzero".into()));
            }
            Ok(vec![v])
        }
        None => Ok(DEFAULT_T_SAMPLES.iter().map(|(p, q)| Scalar::from_ratio(f, *p, *q)).collect()),
    }
}

fn lefschetz_json(rep: &LefschetzReport) -> Value {
    Value::Array(
        rep.entries
            .iter()
            .map(|e| json!({ "degree": e.degree, "source_dim": e.source_dim, "target_dim": e.target_dim, "kernel_dim": e.kernel_dim, "iso": e.iso }))
            .collect(),
    )
}

/// Kernel basis rendered in the model, and canonically in the frame when there is one.
fn kernel_json(model: &Model, ring: &CohomologyRing, k: u32, ker: &Subspace) -> Value {
    let reps: Vec<Element> = ker.basis().iter().map(|c| ring.representative(&CohClass::new(k, c.clone()))).collect();
    let mut o = json!({ "dim": ker.dim(), "basis": reps.iter().map(|x| model.alg.render(x)).collect::<Vec<_>>() });
    if let Some((real, iso)) = &model.frame {
        let monos = real.monomials_of_degree(k);
        let vecs = reps.iter().map(|x| real.coords(&iso.forward(x).expect("model element"), &monos)).collect();
        let sub = Subspace::span(model.field(), monos.len(), vecs).expect("ambient");
        o["frame_basis"] = json!(sub.basis().iter().map(|v| real.render(&real.from_coords(&monos, v))).collect::<Vec<_>>());
    }
    o
}

/// The surgered model: blow-up along the torus centers at `t`, then resolution with the
/// exceptional sets. Returns the final ring and symplectic class.
struct Surgered {
    blowup: Option<BlowupRing>,
    resolution: Option<ResolutionRing>,
}

fn surgered(model: &Model, ring: &CohomologyRing, r: &mut Report) -> Result<Surgered, WorkbenchError> {
    let centers = model.centers(ring)?;
    r.warnings.extend(model.surgery_warnings());
    let blowup = if centers.is_empty() {
        None
    } else {
        let b = BlowupRing::new(BlowupData { base: ring.ring().clone(), centers }).map_err(|e| WorkbenchError::Validation(e.to_string()))?;
        r.step("blow-up ring: base plus H(N) sigma^j summands, sigma^k reduced by the Chern and Poincare dual relation; validated");
        Some(b)
    };
    let ex = model.exceptional_sets()?;
    let resolution = if ex.is_empty() {
        None
    } else {
        let base: GradedRing = blowup.as_ref().map_or_else(|| ring.ring().clone(), |b| b.ring().clone());
        let res = ResolutionRing::new(ResolutionData { base, exceptional: ex }).map_err(|e| WorkbenchError::Validation(e.to_string()))?;
        r.warnings.extend(res.warnings.iter().cloned());
        r.step("resolution ring: base plus exceptional cohomology, local pairings in the top degree; validated");
        Some(res)
    };
    Ok(Surgered { blowup, resolution })
}

/// Lefschetz analysis of the base and of the surgered model. Returns whether the final
/// model satisfies the Lefschetz property.
fn lefschetz_analysis(model: &Model, ring: &CohomologyRing, flags: &Flags, r: &mut Report) -> Result<bool, WorkbenchError> {
    let w = model.omega_class(ring)?;
    let base = ring.ring().lefschetz_report(&w);
    r.set("base", lefschetz_json(&base));
    let mut kernels = serde_json::Map::new();
    for e in &base.entries {
        if e.kernel_dim > 0 {
            kernels.insert(format!("H{}", e.degree), kernel_json(model, ring, e.degree, &ring.ring().lefschetz_kernel(&w, e.degree)));
        }
    }
    r.set("base_kernels", Value::Object(kernels));
    r.set("base_satisfied", base.satisfied);
    r.step("Lefschetz maps omega^{n-k}: H^k -> H^{2n-k} on the base");
    let sg = surgered(model, ring, r)?;
    let ts = samples(model, flags)?;
    let mut satisfied = base.satisfied;
    let mut res_omega = w.clone();
    if let Some(b) = &sg.blowup {
        let rep = blowup_lefschetz(b, &w, &ts);
        r.step("blow-up symplectic class pi^* omega + t sum sigma at sampled t; determinant in t by interpolation");
        let samples: Vec<Value> = rep
            .samples
            .iter()
            .map(|smp| {
                json!({
                    "t": smp.t.to_string(),
                    "kernel_dims": smp.entries.iter().map(|e| e.kernel_dim).collect::<Vec<_>>(),
                    "prediction": smp.predicted.iter().map(|(_, p)| match p { Some(true) => "holds", Some(false) => "fails", None => "n/a" }).collect::<Vec<_>>(),
                    "satisfied": smp.satisfied,
                })
            })
            .collect();
        let dets: Vec<Value> = rep
            .determinants
            .iter()
            .map(|d| json!({ "degree": d.degree, "nonzero": d.nonzero, "coefficients": d.coefficients.iter().map(|c| c.to_string()).collect::<Vec<_>>() }))
            .collect();
        r.set(
            "blowup",
            json!({
                "betti": b.betti_numbers(),
                "samples": samples,
                "stable": rep.stable,
                "generic_kernel_dims": rep.generic_kernel_dims.iter().map(|(_, d)| d).collect::<Vec<_>>(),
                "determinants": dets,
                "surface_centers": rep.surface_centers,
                "kernel_prediction_holds": rep.prediction_holds,
                "base_kernel_at_t0": rep.base_kernel_at_zero,
                "satisfied": rep.satisfied,
            }),
        );
        satisfied = rep.satisfied;
        res_omega = b.symplectic_class(&w, &ts[0]);
    }
    if let Some(res) = &sg.resolution {
        let rep = kernel_transfer_check(res, &res_omega);
        r.step("resolution: local Lefschetz on each exceptional set, kernels compared with the base");
        r.set(
            "resolution",
            json!({
                "t": if sg.blowup.is_some() { Some(ts[0].to_string()) } else { None },
                "betti": res.ring().dims(),
                "local_lefschetz": rep.local.iter().map(|(n, ok)| json!({ "set": n, "holds": ok })).collect::<Vec<_>>(),
                "entries": rep.entries.iter().map(|e| json!({ "degree": e.degree, "base_kernel_dim": e.base_kernel_dim, "resolved_kernel_dim": e.resolved_kernel_dim, "pullback_matches": e.pullback_matches })).collect::<Vec<_>>(),
                "biconditional_holds": rep.biconditional_holds,
                "consistent": rep.consistent,
                "satisfied": rep.resolved.satisfied,
            }),
        );
        satisfied = rep.resolved.satisfied;
    }
    Ok(satisfied)
}

fn lefschetz_status(ok: bool) -> String {
    if ok { "LEFSCHETZ_SATISFIED" } else { "LEFSCHETZ_FAILS" }.to_string()
}

fn lefschetz(model: &Model, flags: &Flags, r: &mut Report) -> Result<(), WorkbenchError> {
    let ring = ring_for(model, flags, r)?;
    let ok = lefschetz_analysis(model, &ring, flags, r)?;
    r.status.push(lefschetz_status(ok));
    Ok(())
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect()
}

fn class(model: &Model, ring: &CohomologyRing, context: &str, text: &str) -> Result<CohClass, WorkbenchError> {
    let x = model.parse(context, text)?;
    let k = match model.alg.degree(&x) {
        cdga_core::Degree::Homogeneous(k) => k,
        cdga_core::Degree::Zero => return Err(WorkbenchError::Validation(format!("{context}: `{text}` is zero"))),
        cdga_core::Degree::Mixed => return Err(WorkbenchError::Validation(format!("{context}: `{text}` is not homogeneous"))),
    };
    ring.class_of(&x, k).map_err(|e| WorkbenchError::Validation(format!("{context}: {e}")))
}

fn massey(model: &Model, flags: &Flags, r: &mut Report) -> Result<(), WorkbenchError> {
    let ring = ring_for(model, flags, r)?;
    let texts = split_list(flags.classes.as_deref().ok_or_else(|| WorkbenchError::Validation("massey needs --classes".into()))?);
    let classes = texts.iter().map(|t| class(model, &ring, "--classes", t)).collect::<Result<Vec<_>, _>>()?;
    let coset = if classes.len() == 3 {
        r.step("triple Massey product from primitives; exact indeterminacy a1 H + H a3");
        triple_massey(&ring, &classes[0], &classes[1], &classes[2])
    } else {
        r.step("higher Massey product from a greedy defining system");
        higher_massey(&ring, &classes, &Strategy::Greedy, None)
    }
    .map_err(|e| WorkbenchError::Validation(e.to_string()))?;
    r.set("defined", coset.defined);
    r.set("degree", coset.degree);
    r.set("representative", model.alg.render(&coset.representative_element));
    r.set("class", coords(&coset.representative.coords));
    r.set("indeterminacy_dim", coset.indeterminacy.as_ref().map(|s| s.dim()));
    r.status.push(coset.status.as_str().into());
    Ok(())
}

fn product(model: &Model, ring: &CohomologyRing, flags: &Flags) -> Result<Option<AMasseyResult>, WorkbenchError> {
    let (a, bs) = match (&flags.a, &flags.b, &model.spec.amassey) {
        (Some(a), Some(b), _) => (a.clone(), split_list(b)),
        (None, None, Some(d)) => (d.a.clone(), d.b.clone()),
        (None, None, None) => return Ok(None),
        _ => return Err(WorkbenchError::Validation("--a and --b go together".into())),
    };
    let ac = class(model, ring, "--a", &a)?;
    let bc = bs.iter().map(|b| class(model, ring, "--b", b)).collect::<Result<Vec<_>, _>>()?;
    a_massey(ring, &ac, &bc).map(Some).map_err(|e| WorkbenchError::Validation(e.to_string()))
}

fn amassey_json(model: &Model, p: &AMasseyResult) -> Value {
    json!({
        "defined": p.defined,
        "degree": p.degree,
        "representative": model.alg.render(&p.representative_element),
        "class": coords(&p.representative.coords),
        "primitives": p.primitives.iter().map(|x| model.alg.render(x)).collect::<Vec<_>>(),
        "bound_dim": p.bound.dim(),
        "bound_basis": p.bound.basis().iter().map(|v| coords(v)).collect::<Vec<_>>(),
        "certificate": p.certificate.as_str(),
        "witness": p.witness.as_ref().map(|w| w.iter().map(|x| model.alg.render(x)).collect::<Vec<_>>()),
    })
}

fn amassey(model: &Model, flags: &Flags, r: &mut Report) -> Result<(), WorkbenchError> {
    let ring = ring_for(model, flags, r)?;
    let p = product(model, &ring, flags)?.ok_or_else(|| WorkbenchError::Validation("amassey needs --a and --b".into()))?;
    r.step("a-Massey product: primitives of a*b_i, representative from the alternating formula");
    r.step("indeterminacy bound from a*H and the recursive variation span; linear witness search");
    for (k, v) in amassey_json(model, &p).as_object().expect("object") {
        r.set(k, v.clone());
    }
    r.status.push(p.certificate.as_str().into());
    r.status.push(formality_verdict(&[p.certificate]).as_str().into());
    Ok(())
}

fn blowup(model: &Model, flags: &Flags, r: &mut Report) -> Result<(), WorkbenchError> {
    let ring = ring_for(model, flags, r)?;
    let sg = surgered(model, &ring, r)?;
    let b = sg.blowup.ok_or_else(|| WorkbenchError::Validation("the spec has no torus centers".into()))?;
    r.set("base_betti", ring.betti_numbers());
    r.set("betti", b.betti_numbers());
    r.set("poincare_duality", b.ring().check_poincare_duality().is_ok());
    let pds: serde_json::Map<String, Value> =
        b.data().centers.iter().zip(b.poincare_duals()).map(|(c, pd)| (c.name.clone(), coords(&pd.coords))).collect();
    r.set("poincare_duals", Value::Object(pds));
    r.step("Poincare duals from the Gysin map of each center");
    if let Some(p) = product(model, &ring, flags)? {
        let rep = blowup_transfer_hypothesis(b.data(), &p, &[]);
        r.set("product", amassey_json(model, &p));
        let centers: Vec<Value> = rep
            .centers
            .iter()
            .map(|c| {
                json!({
                    "center": c.center,
                    "k": c.codim_half,
                    "lhs_doubled": c.worst,
                    "rhs_doubled": c.bound,
                    "degree_bound_holds": c.degree_bound_holds,
                })
            })
            .collect();
        r.set("transfer", json!({ "transfers": rep.transfers, "centers": centers, "checks": rep.trail }));
        r.status.push(if rep.transfers { "TRANSFER" } else { "NO-TRANSFER" }.into());
    }
    r.status.push("OK".into());
    Ok(())
}

fn resolve(model: &Model, flags: &Flags, r: &mut Report) -> Result<(), WorkbenchError> {
    let ring = ring_for(model, flags, r)?;
    if model.exceptional_sets()?.is_empty() {
        return Err(WorkbenchError::Validation("the spec has no exceptional sets".into()));
    }
    let ok = lefschetz_analysis(model, &ring, flags, r)?;
    if let Some(p) = product(model, &ring, flags)? {
        let rep = resolution_transfer_report(&p);
        r.set("product", amassey_json(model, &p));
        r.set("transfer", json!({ "transfers": rep.transfers, "checks": rep.trail }));
        r.status.push(if rep.transfers { "TRANSFER" } else { "NO-TRANSFER" }.into());
    }
    r.status.push(lefschetz_status(ok));
    Ok(())
}

fn verdict(model: &Model, flags: &Flags, r: &mut Report) -> Result<(), WorkbenchError> {
    let ring = ring_for(model, flags, r)?;
    let mut status = Status::Unknown;
    let mut checks = Vec::new();
    if let Some(p) = product(model, &ring, flags)? {
        r.set("product", amassey_json(model, &p));
        status = p.certificate;
        let centers = model.centers(&ring)?;
        if !centers.is_empty() {
            let data = BlowupData { base: ring.ring().clone(), centers };
            let rep = blowup_transfer_hypothesis(&data, &p, &[]);
            checks.extend(rep.trail.iter().cloned());
            if !rep.transfers {
                status = Status::Unknown;
            }
        }
        if !model.exceptional_sets()?.is_empty() {
            let mut carried = p.clone();
            carried.certificate = status;
            let rep = resolution_transfer_report(&carried);
            checks.extend(rep.trail.iter().cloned());
            if !rep.transfers {
                status = Status::Unknown;
            }
        }
    }
    r.set("transfer_checks", checks);
    r.set("final_product_status", status.as_str());
    let v = formality_verdict(&[status]);
    r.step("a certified nontrivial a-Massey product rules out formality");
    let ok = if model.omega.is_some() { Some(lefschetz_analysis(model, &ring, flags, r)?) } else { None };
    r.status.push(v.as_str().into());
    if let Some(ok) = ok {
        r.status.push(lefschetz_status(ok));
    }
    Ok(())
}
