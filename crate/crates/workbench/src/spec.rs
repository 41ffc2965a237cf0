//! The `cdgaw/1` JSON input format and the model built from it.

use std::collections::BTreeMap;

use cdga_core::linalg::Matrix;
use cdga_core::ring::{CohClass, GradedRing};
use cdga_core::scalars::parse_polynomial;
use cdga_core::surgery::{torus_center, Center, ExceptionalSet};
use cdga_core::{
    invariant_subcomplex, validate_action, Cdga, CdgaIsomorphism, CohomologyRing, Element, Field, FieldRef, FieldSpec, Generator,
    GroupAction, Scalar,
};
use serde::{Deserialize, Serialize};

use crate::expr::{parse_element, parse_linear, ExprError};
use crate::WorkbenchError;

pub const SCHEMA: &str = "cdgaw/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub schema: String,
    #[serde(default)]
    pub field: FieldDecl,
    pub generators: Vec<GeneratorDecl>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub differential: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<ActionDecl>,
    /// The spec models the quotient: every command works on the invariant subcomplex.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub quotient: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symplectic: Option<String>,
    /// Real frame: each generator written in terms of frame 1-forms.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<FrameDecl>,
    /// Preferred cohomology bases, keyed by degree.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub bases: BTreeMap<String, Vec<String>>,
    /// Default a-Massey product for `amassey`, `blowup`, `resolve` and `verdict`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amassey: Option<AMasseyDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub surgery: Vec<SurgeryDecl>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldDecl {
    /// `"rationals"` or `"cyclotomic12"`.
    Named(String),
    Custom {
        modulus: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        conjugation: Option<String>,
    },
}

impl Default for FieldDecl {
    fn default() -> Self {
        FieldDecl::Named("cyclotomic12".into())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDecl {
    pub name: String,
    #[serde(default = "one")]
    pub degree: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjugate: Option<String>,
}

fn one() -> u32 {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum ActionDecl {
    /// Weights default to the generator weights.
    Diagonal {
        order: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        weights: Option<BTreeMap<String, i64>>,
    },
    Linear { order: u32, images: BTreeMap<String, String> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameDecl {
    pub generators: Vec<String>,
    pub images: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AMasseyDecl {
    pub a: String,
    pub b: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum SurgeryDecl {
    Torus {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        /// Two tangent vectors, each a token list joined into a linear expression.
        plane: [Vec<String>; 2],
        /// Defaults to 1 when absent; reports flag the default.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        covolume: Option<String>,
        codim_half: u32,
        /// Coordinates of `c_1, c_2, ...` in `H^2(T), H^4(T), ...`.
        #[serde(default)]
        chern: Vec<Vec<String>>,
    },
    Exceptional {
        name: String,
        /// Dimensions in degrees `0..=2n`; degree 0 must be 1 (the unit).
        dims: Vec<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<Vec<String>>>,
        /// Nonzero products of basis classes in positive degrees; the reversed products
        /// follow by graded commutativity.
        #[serde(default)]
        products: Vec<ProductDecl>,
        /// Local pairing matrices keyed by the degree of the left factor.
        pairing: BTreeMap<String, Vec<Vec<String>>>,
        omega: Vec<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductDecl {
    /// `(degree, index)` of each factor.
    pub left: (u32, usize),
    pub right: (u32, usize),
    pub value: Vec<String>,
}

/// Parses a spec from JSON text; syntax errors carry the JSON line and column.
pub fn parse_spec(text: &str) -> Result<SpecFile, WorkbenchError> {
    let spec: SpecFile = serde_json::from_str(text).map_err(|e| WorkbenchError::Parse {
        context: "json".into(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if spec.schema != SCHEMA {
        return Err(WorkbenchError::Validation(format!("unsupported schema `{}`, expected `{SCHEMA}`", spec.schema)));
    }
    Ok(spec)
}

pub fn render_spec(spec: &SpecFile) -> String {
    serde_json::to_string_pretty(spec).expect("spec serializes")
}

/// An algebra together with everything the commands need from the spec.
#[derive(Clone, Debug)]
pub struct Model {
    pub spec: SpecFile,
    pub alg: Cdga,
    pub action: Option<GroupAction>,
    pub omega: Option<Element>,
    /// Frame algebra with the transported differential, and the substitution.
    pub frame: Option<(Cdga, CdgaIsomorphism)>,
    pub warnings: Vec<String>,
}

fn expr_err(context: &str, source: Option<&str>, text: &str, e: ExprError) -> WorkbenchError {
    // locate the expression inside the source document when possible
    if let Some(src) = source {
        let quoted = serde_json::to_string(text).expect("string");
        if let Some(off) = src.find(&quoted) {
            let before = &src[..off];
            let line = before.matches('\n').count() + 1;
            let line_start = before.rfind('\n').map_or(0, |i| i + 1);
            let column = before[line_start..].chars().count() + 1 + e.column;
            return WorkbenchError::Parse { context: context.into(), line, column, message: e.message };
        }
    }
    WorkbenchError::Parse { context: context.into(), line: 1, column: e.column, message: e.message }
}

fn scalar(field: &FieldRef, context: &str, text: &str) -> Result<Scalar, WorkbenchError> {
    Scalar::parse(field, text).map_err(|e| WorkbenchError::Parse { context: context.into(), line: 1, column: 1, message: e.to_string() })
}

fn build_field(decl: &FieldDecl) -> Result<FieldRef, WorkbenchError> {
    match decl {
        FieldDecl::Named(n) if n == "rationals" => Ok(Field::rationals()),
        FieldDecl::Named(n) if n == "cyclotomic12" => Ok(Field::default_field()),
        FieldDecl::Named(n) => Err(WorkbenchError::Validation(format!("unknown field `{n}`"))),
        FieldDecl::Custom { modulus, conjugation } => {
            let perr = |ctx: &str, e: cdga_core::ScalarError| WorkbenchError::Parse { context: ctx.into(), line: 1, column: 1, message: e.to_string() };
            let minimal_polynomial = parse_polynomial(modulus).map_err(|e| perr("field.modulus", e))?;
            let conjugation_image = conjugation.as_deref().map(parse_polynomial).transpose().map_err(|e| perr("field.conjugation", e))?;
            Field::new(FieldSpec { minimal_polynomial, conjugation_image }).map_err(|e| WorkbenchError::Validation(e.to_string()))
        }
    }
}

impl Model {
    /// Builds and validates the algebra. `source` is the original text, used to report
    /// expression errors at their position in the file.
    pub fn build(spec: SpecFile, source: Option<&str>) -> Result<Model, WorkbenchError> {
        let field = build_field(&spec.field)?;
        let gens = spec
            .generators
            .iter()
            .map(|g| {
                let mut x = Generator::new(g.name.clone(), g.degree);
                if let Some(w) = g.weight {
                    x = x.with_weight(w);
                }
                if let Some(c) = &g.conjugate {
                    x = x.with_conjugate(c.clone());
                }
                x
            })
            .collect();
        let free = Cdga::free(&field, gens).map_err(|e| WorkbenchError::Validation(e.to_string()))?;
        let mut warnings = Vec::new();
        let mut images = vec![free.zero(); free.num_generators()];
        for (name, text) in &spec.differential {
            let i = free.generator_index(name).map_err(|e| WorkbenchError::Validation(format!("differential: {e}")))?;
            let p = parse_element(&free, text).map_err(|e| expr_err(&format!("differential.{name}"), source, text, e))?;
            warnings.extend(p.warnings.into_iter().map(|w| format!("differential.{name}: {w}")));
            images[i] = p.element;
        }
        let alg = free.with_differential(images).map_err(|e| WorkbenchError::Validation(e.to_string()))?;

        let action = match &spec.action {
            None => None,
            Some(ActionDecl::Diagonal { order, weights: None }) => Some(GroupAction::diagonal_from_generators(&alg, *order)),
            Some(ActionDecl::Diagonal { order, weights: Some(w) }) => {
                let mut ws = vec![0i64; alg.num_generators()];
                for (name, v) in w {
                    let i = alg.generator_index(name).map_err(|e| WorkbenchError::Validation(format!("action: {e}")))?;
                    ws[i] = *v;
                }
                Some(GroupAction::Diagonal { order: *order, weights: ws })
            }
            Some(ActionDecl::Linear { order, images }) => {
                let mut imgs: Vec<Element> = (0..alg.num_generators()).map(|i| alg.generator(i)).collect();
                for (name, text) in images {
                    let i = alg.generator_index(name).map_err(|e| WorkbenchError::Validation(format!("action: {e}")))?;
                    imgs[i] = parse_element(&alg, text).map_err(|e| expr_err(&format!("action.images.{name}"), source, text, e))?.element;
                }
                Some(GroupAction::Linear { order: *order, images: imgs })
            }
        };
        if let Some(act) = &action {
            let r = validate_action(&alg, act);
            if !r.valid {
                return Err(WorkbenchError::Validation(format!("action: {}", r.failures.join("; "))));
            }
        }
        if spec.quotient && action.is_none() {
            return Err(WorkbenchError::Validation("quotient: the spec declares no action".into()));
        }

        let omega = match &spec.symplectic {
            None => None,
            Some(text) => {
                let p = parse_element(&alg, text).map_err(|e| expr_err("symplectic", source, text, e))?;
                alg.expect_degree(&p.element, 2).map_err(|e| WorkbenchError::Validation(format!("symplectic: {e}")))?;
                if !alg.d(&p.element).is_zero() {
                    return Err(WorkbenchError::Validation("symplectic form is not closed".into()));
                }
                Some(p.element)
            }
        };

        let frame = match &spec.frame {
            None => None,
            Some(fr) => {
                let names = fr.generators.clone();
                let gens = names.iter().map(|n| Generator::new(n.clone(), 1)).collect();
                let mut texts = Vec::new();
                for g in alg.generators() {
                    let t = fr.images.get(&g.name).ok_or_else(|| WorkbenchError::Validation(format!("frame: no image for {}", g.name)))?;
                    texts.push((g.name.clone(), t.clone()));
                }
                let mut perr = None;
                let res = CdgaIsomorphism::transport(&alg, gens, |target| {
                    let mut out = Vec::new();
                    for (name, t) in &texts {
                        match parse_element(target, t) {
                            Ok(p) => out.push(p.element),
                            Err(e) => {
                                perr = Some(expr_err(&format!("frame.images.{name}"), source, t, e));
                                out.push(target.zero());
                            }
                        }
                    }
                    Ok(out)
                });
                if let Some(e) = perr {
                    return Err(e);
                }
                Some(res.map_err(|e| WorkbenchError::Validation(format!("frame: {e}")))?)
            }
        };

        Ok(Model { spec, alg, action, omega, frame, warnings })
    }

    pub fn field(&self) -> &FieldRef {
        self.alg.field()
    }

    pub fn parse(&self, context: &str, text: &str) -> Result<Element, WorkbenchError> {
        parse_element(&self.alg, text).map(|p| p.element).map_err(|e| expr_err(context, None, text, e))
    }

    /// Cohomology, of the invariant subcomplex when `invariant` is set, with the
    /// preferred bases installed.
    pub fn cohomology(&self, invariant: bool) -> Result<CohomologyRing, WorkbenchError> {
        let invariant = invariant || self.spec.quotient;
        let sub = if invariant {
            let act = self.action.as_ref().ok_or_else(|| WorkbenchError::Validation("--invariant needs an action".into()))?;
            Some(invariant_subcomplex(&self.alg, act).map_err(|e| WorkbenchError::Validation(e.to_string()))?)
        } else {
            None
        };
        let mut ring = CohomologyRing::build(&self.alg, sub.as_ref()).map_err(|e| WorkbenchError::Validation(e.to_string()))?;
        // preferred bases describe the modelled complex: the invariant one when there is an action
        let install = invariant || self.action.is_none();
        for (deg, texts) in self.spec.bases.iter().filter(|_| install) {
            let k: u32 = deg.parse().map_err(|_| WorkbenchError::Validation(format!("bases: bad degree `{deg}`")))?;
            let reps = texts.iter().map(|t| self.parse(&format!("bases.{deg}"), t)).collect::<Result<Vec<_>, _>>()?;
            ring = ring.with_basis(k, reps, texts.clone()).map_err(|e| WorkbenchError::Validation(format!("bases.{deg}: {e}")))?;
        }
        Ok(ring)
    }

    pub fn omega_class(&self, ring: &CohomologyRing) -> Result<CohClass, WorkbenchError> {
        let w = self.omega.as_ref().ok_or_else(|| WorkbenchError::Validation("no symplectic form in the spec".into()))?;
        ring.class_of(w, 2).map_err(|e| WorkbenchError::Validation(format!("symplectic: {e}")))
    }

    /// Values of the generators on a tangent vector written in frame (or generator) names.
    pub fn vector(&self, context: &str, text: &str) -> Result<Vec<Scalar>, WorkbenchError> {
        let field = self.field();
        match &self.frame {
            Some((real, iso)) => {
                let names: Vec<String> = real.generators().iter().map(|g| g.name.clone()).collect();
                let v = parse_linear(field, &names, text).map_err(|e| expr_err(context, None, text, e))?;
                Ok(iso
                    .images()
                    .iter()
                    .map(|img| {
                        img.terms().iter().fold(Scalar::zero(field), |acc, (m, c)| {
                            let a = m.indices().next().expect("degree one");
                            &acc + &(c * &v[a])
                        })
                    })
                    .collect())
            }
            None => {
                let names: Vec<String> = self.alg.generators().iter().map(|g| g.name.clone()).collect();
                parse_linear(field, &names, text).map_err(|e| expr_err(context, None, text, e))
            }
        }
    }

    pub fn centers(&self, ring: &CohomologyRing) -> Result<Vec<Center>, WorkbenchError> {
        let field = self.field();
        let mut out = Vec::new();
        for (idx, s) in self.spec.surgery.iter().enumerate() {
            let SurgeryDecl::Torus { name, plane, covolume, codim_half, chern } = s else { continue };
            let name = name.clone().unwrap_or_else(|| format!("T{}", idx + 1));
            let v1 = self.vector(&format!("surgery.{name}.plane[0]"), &plane[0].join(" "))?;
            let v2 = self.vector(&format!("surgery.{name}.plane[1]"), &plane[1].join(" "))?;
            let cov = scalar(field, "covolume", covolume.as_deref().unwrap_or("1"))?;
            let mut c = torus_center(name.clone(), ring, &v1, &v2, &cov).map_err(|e| WorkbenchError::Validation(e.to_string()))?;
            if c.codim_half != *codim_half {
                return Err(WorkbenchError::Validation(format!(
                    "surgery.{name}: codim_half {codim_half} does not match the ambient dimension (expected {})",
                    c.codim_half
                )));
            }
            for (i, coords) in chern.iter().enumerate() {
                let v = coords.iter().map(|t| scalar(field, "chern", t)).collect::<Result<Vec<_>, _>>()?;
                c.chern.push(CohClass::new(2 * (i as u32 + 1), v));
            }
            out.push(c);
        }
        Ok(out)
    }

    /// Warnings for torus centers whose covolume was not given.
    pub fn surgery_warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (idx, s) in self.spec.surgery.iter().enumerate() {
            if let SurgeryDecl::Torus { name, covolume: None, .. } = s {
                let name = name.clone().unwrap_or_else(|| format!("T{}", idx + 1));
                out.push(format!("surgery.{name}: covolume not given, using 1 (kernel and isomorphism conclusions do not depend on it)"));
            }
        }
        out
    }

    pub fn exceptional_sets(&self) -> Result<Vec<ExceptionalSet>, WorkbenchError> {
        let field = self.field();
        let mut out = Vec::new();
        for s in &self.spec.surgery {
            let SurgeryDecl::Exceptional { name, dims, labels, products, pairing, omega } = s else { continue };
            out.push(exceptional(field, name, dims, labels.as_ref(), products, pairing, omega)?);
        }
        Ok(out)
    }
}

fn exceptional(
    field: &FieldRef,
    name: &str,
    dims: &[usize],
    labels: Option<&Vec<Vec<String>>>,
    products: &[ProductDecl],
    pairing: &BTreeMap<String, Vec<Vec<String>>>,
    omega: &[String],
) -> Result<ExceptionalSet, WorkbenchError> {
    let bad = |m: String| WorkbenchError::Validation(format!("exceptional set {name}: {m}"));
    if dims.first() != Some(&1) {
        return Err(bad("degree 0 must be one-dimensional".into()));
    }
    let top = dims.len() - 1;
    let labels: Vec<Vec<String>> = match labels {
        Some(l) if l.len() == dims.len() && l.iter().zip(dims).all(|(a, d)| a.len() == *d) => l.clone(),
        Some(_) => return Err(bad("labels do not match dims".into())),
        None => dims.iter().enumerate().map(|(k, d)| (0..*d).map(|i| format!("b{k}_{i}")).collect()).collect(),
    };
    let mut table: BTreeMap<(u32, usize, u32, usize), Vec<Scalar>> = BTreeMap::new();
    for p in products {
        let (dl, il) = p.left;
        let (dr, ir) = p.right;
        let d = (dl + dr) as usize;
        if dl == 0 || dr == 0 || d > top || il >= dims[dl as usize] || ir >= dims[dr as usize] || p.value.len() != dims[d] {
            return Err(bad(format!("bad product entry {:?} x {:?}", p.left, p.right)));
        }
        let v = p.value.iter().map(|t| scalar(field, "products", t)).collect::<Result<Vec<_>, _>>()?;
        let sign = if dl % 2 == 1 && dr % 2 == 1 { -Scalar::one(field) } else { Scalar::one(field) };
        let rev: Vec<Scalar> = v.iter().map(|x| x * &sign).collect();
        table.insert((dl, il, dr, ir), v);
        table.entry((dr, ir, dl, il)).or_insert(rev);
    }
    let ring = GradedRing::from_products(field, dims.to_vec(), labels, vec![Scalar::one(field)], |p, i, q, j| {
        let d = (p + q) as usize;
        if p == 0 || q == 0 {
            let mut v = vec![Scalar::zero(field); dims[d]];
            v[if p == 0 { j } else { i }] = Scalar::one(field);
            return v;
        }
        table.get(&(p, i, q, j)).cloned().unwrap_or_else(|| vec![Scalar::zero(field); dims[d]])
    });
    let mut mats = Vec::new();
    for k in 0..=top {
        let mut m = Matrix::zeros(field, dims[k], dims[top - k]);
        if let Some(rows) = pairing.get(&k.to_string()) {
            if rows.len() != dims[k] || rows.iter().any(|r| r.len() != dims[top - k]) {
                return Err(bad(format!("pairing in degree {k} has the wrong shape")));
            }
            for (i, r) in rows.iter().enumerate() {
                for (j, t) in r.iter().enumerate() {
                    m.set(i, j, scalar(field, "pairing", t)?);
                }
            }
        }
        mats.push(m);
    }
    if omega.len() != dims.get(2).copied().unwrap_or(0) {
        return Err(bad("omega has the wrong number of coordinates".into()));
    }
    let w = omega.iter().map(|t| scalar(field, "omega", t)).collect::<Result<Vec<_>, _>>()?;
    Ok(ExceptionalSet { name: name.into(), ring, pairing: mats, omega: CohClass::new(2, w) })
}
