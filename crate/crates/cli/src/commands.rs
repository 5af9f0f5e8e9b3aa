use std::f64::consts::PI;

use chiralkit::classify::finite_classification;
use chiralkit::galilean::Vec3;
use chiralkit::objects::{
    affine_point_symmetries, galilean_point_symmetries, Candidate, ConeShape, DEFAULT_MAX_POINTS,
};
use chiralkit::poincare::{Axis, Convention, Generator, PoincareElement};
use chiralkit::{
    chirality_verdict, AffineIsometry, ChiralityVerdict, Classification, Event, FamilySpec, GalileanIsometry, Matrix,
    OrthogonalMap, QuadraticSpace, Rational, RigidBodySummary, VectorSign,
};
use serde_json::{json, Map, Value};

use crate::json::{array, field, matrix, matrix_json, object, scalar, vec3, vector, vector_json, JsonScalar};
use crate::CliError;

/// Global flags shared by every command.
#[derive(Clone, Debug)]
pub struct Options {
    pub signature: Option<(usize, usize)>,
    pub tol: f64,
    pub exact: bool,
    pub seed: u64,
    pub family_resolution: usize,
    pub allow_boosts: bool,
}

impl Options {
    fn mode(&self) -> Vec<(&'static str, Value)> {
        if self.exact {
            vec![("mode", json!("exact"))]
        } else {
            vec![("mode", json!("float")), ("tolerance", json!(self.tol))]
        }
    }

    fn require_float(&self, command: &str) -> Result<(), CliError> {
        if self.exact {
            return Err(CliError::new("invalid_parameter", format!("{command} runs in float mode only; drop --exact")));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Kind {
    Orthogonal,
    Affine,
    Poincare,
    Galilean,
}

impl Kind {
    fn of(req: &Value) -> Result<Kind, CliError> {
        match req.get("kind").map(|k| k.as_str()) {
            Some(Some("orthogonal")) => Ok(Kind::Orthogonal),
            Some(Some("affine")) => Ok(Kind::Affine),
            Some(Some("poincare")) => Ok(Kind::Poincare),
            Some(Some("galilean")) => Ok(Kind::Galilean),
            Some(other) => Err(CliError::input(format!(
                "kind must be orthogonal, affine, poincare or galilean, got {}",
                other.map_or_else(|| req["kind"].to_string(), str::to_string)
            ))),
            None if req.get("sigma").is_some() || req.get("omega").is_some() => Ok(Kind::Galilean),
            None if req.get("generators").is_some() || req.get("convention").is_some() => Ok(Kind::Poincare),
            None if req.get("translation").is_some() || req.get("homogeneous").is_some() => Ok(Kind::Affine),
            None => Ok(Kind::Orthogonal),
        }
    }
}

fn parse_signature_value(v: &Value) -> Result<(usize, usize), CliError> {
    let bad = || CliError::input(format!("signature must be [p, q] or \"p,q\", got {v}"));
    match v {
        Value::String(s) => crate::parse_signature(s).map_err(|_| bad()),
        Value::Array(a) if a.len() == 2 => {
            let p = a[0].as_u64().ok_or_else(bad)?;
            let q = a[1].as_u64().ok_or_else(bad)?;
            Ok((p as usize, q as usize))
        }
        _ => Err(bad()),
    }
}

/// Flag and request field must agree when both are present.
fn signature(req: &Value, opts: &Options) -> Result<(usize, usize), CliError> {
    let from_req = req.get("signature").map(parse_signature_value).transpose()?;
    match (opts.signature, from_req) {
        (Some(a), Some(b)) if a != b => Err(CliError::new(
            "space_mismatch",
            format!("--signature {},{} disagrees with request signature {},{}", a.0, a.1, b.0, b.1),
        )),
        (Some(s), _) | (None, Some(s)) => Ok(s),
        (None, None) => Err(CliError::input("signature required: pass --signature p,q or a \"signature\" field")),
    }
}

fn space<S: JsonScalar>(req: &Value, opts: &Options) -> Result<QuadraticSpace<S>, CliError> {
    let (p, q) = signature(req, opts)?;
    Ok(QuadraticSpace::with_tolerance(p, q, opts.tol)?)
}

fn convention(req: &Value, opts: &Options) -> Result<Convention, CliError> {
    if let Some(c) = req.get("convention") {
        return match c.as_str() {
            Some("time_first") => Ok(Convention::TimeFirst),
            Some("time_last") => Ok(Convention::TimeLast),
            _ => Err(CliError::input(format!("convention must be \"time_first\" or \"time_last\", got {c}"))),
        };
    }
    let sig = match (opts.signature, req.get("signature")) {
        (Some(s), _) => Some(s),
        (None, Some(v)) => Some(parse_signature_value(v)?),
        (None, None) => None,
    };
    match sig {
        None => Ok(Convention::TimeFirst),
        Some((p, q)) => Convention::from_signature(p, q).ok_or_else(|| {
            CliError::new("invalid_signature", format!("Poincaré elements need (1,3) or (3,1), got ({p},{q})"))
        }),
    }
}

fn convention_name(c: Convention) -> &'static str {
    match c {
        Convention::TimeFirst => "time_first",
        Convention::TimeLast => "time_last",
    }
}

fn sign_name(s: VectorSign) -> &'static str {
    match s {
        VectorSign::Positive => "positive",
        VectorSign::Negative => "negative",
        VectorSign::Null => "null",
    }
}

/// Any element the CLI can classify.
#[derive(Clone, Debug)]
enum Element<S: JsonScalar> {
    Orthogonal(OrthogonalMap<S>),
    Affine(AffineIsometry<S>),
    Poincare(PoincareElement<S>),
    Galilean(GalileanIsometry<S>),
}

fn parse_linear<S: JsonScalar>(req: &Value, space: &QuadraticSpace<S>) -> Result<OrthogonalMap<S>, CliError> {
    if let Some(supports) = req.get("supports") {
        let supports: Vec<Vec<S>> =
            array(supports, "supports")?.iter().map(|u| vector(u, "supports")).collect::<Result<_, _>>()?;
        return Ok(OrthogonalMap::from_reflections(space.clone(), &supports)?);
    }
    Ok(OrthogonalMap::new(space.clone(), matrix(field(req, "matrix")?, "matrix")?)?)
}

fn parse_affine<S: JsonScalar>(req: &Value, space: &QuadraticSpace<S>) -> Result<AffineIsometry<S>, CliError> {
    if let Some(h) = req.get("homogeneous") {
        return Ok(AffineIsometry::from_homogeneous(space.clone(), &matrix(h, "homogeneous")?)?);
    }
    let linear = if req.get("matrix").is_some() || req.get("supports").is_some() {
        parse_linear(req, space)?
    } else {
        OrthogonalMap::identity(space.clone())
    };
    let t = match req.get("translation") {
        Some(t) => vector(t, "translation")?,
        None => vec![S::zero(); space.dim()],
    };
    Ok(AffineIsometry::new(linear, t)?)
}

fn parse_axis(v: &Value) -> Result<Axis, CliError> {
    let s = v.as_str().ok_or_else(|| CliError::input(format!("axis must be \"x\", \"y\" or \"z\", got {v}")))?;
    Ok(s.parse()?)
}

/// Generator objects such as `{"type": "boost", "axis": "x", "cosh": "5/4", "sinh": "3/4"}`.
fn parse_generator_object<S: JsonScalar>(g: &Value) -> Result<Generator<S>, CliError> {
    let ty = field(g, "type")?.as_str().unwrap_or_default();
    match ty {
        "P" => Ok(Generator::Parity),
        "T" => Ok(Generator::TimeReversal),
        "PT" => Ok(Generator::ParityTimeReversal),
        "boost" => Ok(Generator::Boost {
            axis: parse_axis(field(g, "axis")?)?,
            cosh: scalar(g, "cosh")?,
            sinh: scalar(g, "sinh")?,
        }),
        "rotation" => Ok(Generator::Rotation {
            axis: parse_axis(field(g, "axis")?)?,
            cos: scalar(g, "cos")?,
            sin: scalar(g, "sin")?,
        }),
        "translation" => Ok(Generator::Translation(vector(field(g, "vector")?, "vector")?)),
        _ => Err(chiralkit::Error::UnknownGenerator(g.to_string()).into()),
    }
}

fn parse_generator<S: JsonScalar>(g: &Value) -> Result<Generator<S>, CliError> {
    match g {
        Value::String(s) if S::EXACT => match s.trim() {
            "P" => Ok(Generator::Parity),
            "T" => Ok(Generator::TimeReversal),
            "PT" | "TP" => Ok(Generator::ParityTimeReversal),
            _ => Err(CliError::new(
                "invalid_parameter",
                format!(
                    "generator {s} has a transcendental parameter; use an object with rational cosh/sinh or cos/sin"
                ),
            )),
        },
        Value::String(s) => {
            let parsed: Generator<f64> = s.parse()?;
            Ok(map_generator(parsed))
        }
        _ => parse_generator_object(g),
    }
}

/// Only reached in float mode, where `S` is `f64`.
fn map_generator<S: JsonScalar>(g: Generator<f64>) -> Generator<S> {
    let c = |x: f64| S::from_f64(x).expect("finite parameter");
    match g {
        Generator::Parity => Generator::Parity,
        Generator::TimeReversal => Generator::TimeReversal,
        Generator::ParityTimeReversal => Generator::ParityTimeReversal,
        Generator::Boost { axis, cosh, sinh } => Generator::Boost { axis, cosh: c(cosh), sinh: c(sinh) },
        Generator::Rotation { axis, cos, sin } => Generator::Rotation { axis, cos: c(cos), sin: c(sin) },
        Generator::Translation(t) => Generator::Translation(t.into_iter().map(c).collect()),
    }
}

fn parse_poincare<S: JsonScalar>(req: &Value, opts: &Options) -> Result<PoincareElement<S>, CliError> {
    let conv = convention(req, opts)?;
    if let Some(gens) = req.get("generators") {
        let mut g = PoincareElement::identity(conv, opts.tol);
        for item in array(gens, "generators")? {
            let next = PoincareElement::generator(&parse_generator::<S>(item)?, conv, opts.tol)?;
            g = g.compose(&next)?;
        }
        return Ok(g);
    }
    let (p, q) = conv.signature();
    let space = QuadraticSpace::with_tolerance(p, q, opts.tol)?;
    Ok(PoincareElement::new(conv, parse_affine(req, &space)?)?)
}

fn parse_galilean<S: JsonScalar>(req: &Value, opts: &Options) -> Result<GalileanIsometry<S>, CliError> {
    let sigma = match req.get("sigma") {
        None => 1,
        Some(v) => match v.as_i64() {
            Some(1) => 1,
            Some(-1) => -1,
            _ => return Err(CliError::new("invalid_parameter", format!("sigma must be 1 or -1, got {v}"))),
        },
    };
    let zero3 = || [S::zero(), S::zero(), S::zero()];
    let omega = match req.get("omega") {
        Some(m) => matrix(m, "omega")?,
        None => Matrix::identity(3),
    };
    let v = req.get("v").map(|x| vec3(x, "v")).transpose()?.unwrap_or_else(zero3);
    let s = req.get("s").map(|x| S::from_json(x, "s")).transpose()?.unwrap_or_else(S::zero);
    let z = req.get("z").map(|x| vec3(x, "z")).transpose()?.unwrap_or_else(zero3);
    Ok(GalileanIsometry::new(sigma, omega, v, s, z, opts.tol)?)
}

fn parse_element<S: JsonScalar>(req: &Value, opts: &Options) -> Result<Element<S>, CliError> {
    Ok(match Kind::of(req)? {
        Kind::Orthogonal => Element::Orthogonal(parse_linear(req, &space(req, opts)?)?),
        Kind::Affine => Element::Affine(parse_affine(req, &space(req, opts)?)?),
        Kind::Poincare => Element::Poincare(parse_poincare(req, opts)?),
        Kind::Galilean => Element::Galilean(parse_galilean(req, opts)?),
    })
}

fn galilean_json<S: JsonScalar>(g: &GalileanIsometry<S>) -> Value {
    object([
        ("kind", json!("galilean")),
        ("sigma", json!(g.sigma)),
        ("omega", matrix_json(&g.omega)),
        ("v", vector_json(&g.v)),
        ("s", g.s.to_json()),
        ("z", vector_json(&g.z)),
    ])
}

fn signature_json<S: JsonScalar>(space: &QuadraticSpace<S>) -> Value {
    let sig = space.signature();
    json!([sig.p, sig.q])
}

impl<S: JsonScalar> Element<S> {
    fn to_json(&self) -> Value {
        match self {
            Element::Orthogonal(m) => object([
                ("kind", json!("orthogonal")),
                ("signature", signature_json(m.space())),
                ("matrix", matrix_json(m.matrix())),
            ]),
            Element::Affine(a) => object([
                ("kind", json!("affine")),
                ("signature", signature_json(a.space())),
                ("matrix", matrix_json(a.linear().matrix())),
                ("translation", vector_json(a.translation())),
            ]),
            Element::Poincare(p) => object([
                ("kind", json!("poincare")),
                ("convention", json!(convention_name(p.convention()))),
                ("matrix", matrix_json(p.linear_matrix())),
                ("translation", vector_json(p.affine().translation())),
            ]),
            Element::Galilean(g) => galilean_json(g),
        }
    }

    fn classify(&self) -> Result<Classification, CliError> {
        Ok(match self {
            Element::Orthogonal(m) => m.classify()?,
            Element::Affine(a) => a.classify()?,
            Element::Poincare(p) => p.classify()?,
            Element::Galilean(g) => g.classify(),
        })
    }

    fn compose(&self, other: &Self) -> Result<Self, CliError> {
        Ok(match (self, other) {
            (Element::Orthogonal(a), Element::Orthogonal(b)) => Element::Orthogonal(a.compose(b)?),
            (Element::Affine(a), Element::Affine(b)) => Element::Affine(a.compose(b)?),
            (Element::Poincare(a), Element::Poincare(b)) => Element::Poincare(a.compose(b)?),
            (Element::Galilean(a), Element::Galilean(b)) => Element::Galilean(a.compose(b)),
            _ => return Err(CliError::new("space_mismatch", "cannot compose elements of different kinds")),
        })
    }

    fn witness(&self, tol: f64) -> Result<Vec<Self>, CliError> {
        Ok(match self {
            Element::Orthogonal(m) => m.direct_witness()?.into_iter().map(Element::Orthogonal).collect(),
            Element::Affine(a) => a.direct_witness()?.into_iter().map(Element::Affine).collect(),
            Element::Poincare(p) => p.direct_witness()?.into_iter().map(Element::Poincare).collect(),
            Element::Galilean(g) => g.direct_witness(tol)?.into_iter().map(Element::Galilean).collect(),
        })
    }

    /// Parity pair of the linear part, or the time/space sign labels for
    /// Galilean elements.
    fn labels(&self) -> Result<(&'static str, Value), CliError> {
        let pair = |m: &OrthogonalMap<S>| -> Result<Value, CliError> { Ok(json!(m.parity_pair()?.as_array())) };
        Ok(match self {
            Element::Orthogonal(m) => ("parity_pair", pair(m)?),
            Element::Affine(a) => ("parity_pair", pair(a.linear())?),
            Element::Poincare(p) => ("parity_pair", pair(p.affine().linear())?),
            Element::Galilean(g) => ("chi", json!(g.chi())),
        })
    }
}

pub fn classify<S: JsonScalar>(req: &Value, opts: &Options) -> Result<Value, CliError> {
    let g = parse_element::<S>(req, opts)?;
    let class = g.classify()?;
    let mut out = opts.mode();
    out.push(("classification", json!(class.as_str())));
    out.push(g.labels()?);
    out.push(("kind", g.to_json()["kind"].clone()));
    if let Element::Poincare(p) = &g {
        out.push(("proper_orthochronous", json!(p.is_proper_orthochronous())));
    }
    if class == Classification::Direct {
        match g.witness(opts.tol) {
            Ok(w) => out.push(("witness", Value::Array(w.iter().map(Element::to_json).collect()))),
            Err(e) => {
                out.push(("witness", Value::Null));
                out.push(("witness_error", e.to_json()["error"].clone()));
            }
        }
    }
    Ok(object(out))
}

pub fn decompose<S: JsonScalar>(req: &Value, opts: &Options) -> Result<Value, CliError> {
    let space = space::<S>(req, opts)?;
    let m = OrthogonalMap::new(space.clone(), matrix(field(req, "matrix")?, "matrix")?)?;
    let f = m.decompose()?;
    let mut out = opts.mode();
    out.extend([
        ("kind", json!("orthogonal")),
        ("signature", signature_json(&space)),
        ("supports", Value::Array(f.supports.iter().map(|u| vector_json(u)).collect())),
        ("signs", Value::Array(f.signs.iter().map(|s| json!(sign_name(*s))).collect())),
        ("reflection_count", json!(f.len())),
        ("parity_pair", json!(f.parity_pair().as_array())),
        ("classification", json!(f.parity_pair().classification().as_str())),
    ]);
    if !S::EXACT {
        let back = f.reconstruct(&space)?;
        out.push(("reconstruction_error", json!(back.max_abs_diff(m.matrix()).to_f64_lossy())));
    }
    Ok(object(out))
}

/// Request fields apart from `elements` are defaults for every element.
fn merged(base: &Value, item: &Value) -> Result<Value, CliError> {
    let mut out: Map<String, Value> = base.as_object().cloned().unwrap_or_default();
    out.remove("elements");
    let item = item.as_object().ok_or_else(|| CliError::input("each element must be a JSON object"))?;
    out.extend(item.iter().map(|(k, v)| (k.clone(), v.clone())));
    Ok(Value::Object(out))
}

pub fn compose<S: JsonScalar>(req: &Value, opts: &Options) -> Result<Value, CliError> {
    let elements: Vec<Element<S>> = match req.get("elements") {
        Some(list) => {
            let list = array(list, "elements")?;
            if list.is_empty() {
                return Err(CliError::input("elements must not be empty"));
            }
            list.iter().map(|item| parse_element(&merged(req, item)?, opts)).collect::<Result<_, _>>()?
        }
        None => vec![parse_element(req, opts)?],
    };
    let mut product = elements[0].clone();
    for g in &elements[1..] {
        product = product.compose(g)?;
    }
    let mut out = opts.mode();
    out.push(("count", json!(elements.len())));
    out.push(("classification", json!(product.classify()?.as_str())));
    out.push(product.labels()?);
    out.push(("product", product.to_json()));
    Ok(object(out))
}

pub fn oracle<S: JsonScalar>(req: &Value, opts: &Options) -> Result<Value, CliError> {
    let list = array(field(req, "elements")?, "elements")?;
    if list.is_empty() {
        return Err(CliError::input("elements must not be empty"));
    }
    let mut names = Vec::with_capacity(list.len());
    let mut mats: Vec<Matrix<S>> = Vec::with_capacity(list.len());
    for (i, item) in list.iter().enumerate() {
        let name = match item.get("name") {
            Some(Value::String(s)) => s.clone(),
            Some(other) => return Err(CliError::input(format!("element name must be a string, got {other}"))),
            None => format!("g{i}"),
        };
        let m = matrix::<S>(field(item, "matrix")?, "matrix")?;
        if !m.is_square() || (i > 0 && m.rows() != mats[0].rows()) {
            return Err(chiralkit::Error::DimensionMismatch {
                expected: mats.first().map_or(m.rows(), Matrix::rows),
                found: m.cols(),
            }
            .into());
        }
        names.push(name);
        mats.push(m);
    }
    let tol = S::tolerance(opts.tol);
    let equal = |a: &Matrix<S>, b: &Matrix<S>| a.approx_eq(b, &tol);
    let compose = |a: &Matrix<S>, b: &Matrix<S>| a * b;
    let closure = chiralkit::square_closure(&mats, compose, equal)?;
    let classes = finite_classification(&mats, compose, equal)?;
    let closure_names: Vec<Value> = closure
        .iter()
        .map(|c| {
            json!(mats.iter().position(|m| equal(m, c)).map(|i| names[i].clone()).expect("closure of a closed set"))
        })
        .collect();
    let mut out = opts.mode();
    out.extend([
        ("order", json!(mats.len())),
        ("closure", Value::Array(closure_names)),
        (
            "elements",
            Value::Array(
                names
                    .iter()
                    .zip(&classes)
                    .map(|(n, c)| object([("name", json!(n)), ("classification", json!(c.as_str()))]))
                    .collect(),
            ),
        ),
    ]);
    Ok(object(out))
}

fn opt_f64(req: &Value, key: &str, default: f64) -> Result<f64, CliError> {
    req.get(key).map(|v| f64::from_json(v, key)).transpose().map(|v| v.unwrap_or(default))
}

fn opt_vec3(req: &Value, key: &str, default: Vec3<f64>) -> Result<Vec3<f64>, CliError> {
    req.get(key).map(|v| vec3::<f64>(v, key)).transpose().map(|v| v.unwrap_or(default))
}

fn opt_bool(req: &Value, key: &str, default: bool) -> Result<bool, CliError> {
    match req.get(key) {
        None => Ok(default),
        Some(Value::Bool(b)) => Ok(*b),
        Some(v) => Err(CliError::input(format!("{key} must be a boolean, got {v}"))),
    }
}

fn candidate_json(c: &Candidate) -> Value {
    object([
        ("index", json!(c.index)),
        ("label", json!(c.label)),
        ("classification", json!(c.element.classify().as_str())),
        ("element", galilean_json(&c.element)),
    ])
}

/// Defaults: the demo cone (axis `(1,−1,0)/√2`, half-angle π/6, height 2,
/// unit spin, at rest).
pub fn cone_demo(req: &Value, opts: &Options) -> Result<Value, CliError> {
    opts.require_float("cone-demo")?;
    let demo = RigidBodySummary::demo_cone(1.0, 0.0);
    let spin = opt_f64(req, "spin", 1.0)?;
    let speed = opt_f64(req, "speed", 0.0)?;
    let shape = ConeShape::new(opt_f64(req, "half_angle", PI / 6.0)?, opt_f64(req, "height", 2.0)?)?;
    let axis = opt_vec3(req, "axis", demo.axis)?;
    let base_point = opt_vec3(req, "base_point", [0.0; 3])?;
    let unit = RigidBodySummary::new(axis, base_point, shape, [0.0; 3], [0.0; 3])?.axis;
    let nu = opt_vec3(req, "nu", unit.map(|a| a * speed))?;
    let eta = opt_vec3(req, "eta", unit.map(|a| a * spin))?;
    let obj = RigidBodySummary::new(axis, base_point, shape, nu, eta)?;
    let family = FamilySpec {
        resolution: opts.family_resolution,
        rotations: opt_bool(req, "rotations", true)?,
        reflections: opt_bool(req, "reflections", true)?,
        with_inversion: opt_bool(req, "with_inversion", true)?,
        allow_boosts: opts.allow_boosts,
        reference_normal: opt_vec3(req, "reference_normal", [1.0, 1.0, 1.0])?,
    };
    let verdict = chirality_verdict(&obj, &family, opts.tol, opts.seed)?;
    let mut out = opts.mode();
    out.extend([
        ("verdict", json!(verdict.name())),
        ("seed", json!(opts.seed)),
        ("allow_boosts", json!(opts.allow_boosts)),
        ("family_resolution", json!(opts.family_resolution)),
        (
            "object",
            object([
                ("axis", json!(obj.axis)),
                ("base_point", json!(obj.base_point)),
                ("half_angle", json!(obj.shape.half_angle)),
                ("height", json!(obj.shape.height)),
                ("nu", json!(obj.nu)),
                ("eta", json!(obj.eta)),
            ]),
        ),
    ]);
    match &verdict {
        ChiralityVerdict::Achiral { witness } => out.push(("witness", candidate_json(witness))),
        ChiralityVerdict::ChiralWithinFamily { family, candidates } => {
            out.push(("family", json!(family)));
            out.push(("candidates", json!(candidates)));
        }
        ChiralityVerdict::DirectSymmetricOnly { witness, family } => {
            out.push(("family", json!(family)));
            out.push(("witness", candidate_json(witness)));
        }
    }
    Ok(object(out))
}

fn label(item: &Value) -> Value {
    item.get("label").cloned().unwrap_or(Value::Null)
}

pub fn symmetries(req: &Value, opts: &Options) -> Result<Value, CliError> {
    opts.require_float("symmetries")?;
    let max_points = match req.get("max_points") {
        None => DEFAULT_MAX_POINTS,
        Some(v) => {
            v.as_u64().ok_or_else(|| CliError::input(format!("max_points must be a nonnegative integer, got {v}")))?
                as usize
        }
    };
    let galilean = req.get("space").and_then(Value::as_str) == Some("galilean") || req.get("events").is_some();
    let found: Vec<(Classification, Value)> = if galilean {
        let events = array(field(req, "events")?, "events")?
            .iter()
            .map(|e| Ok((Event::new(scalar::<f64>(e, "t")?, vec3(field(e, "x")?, "x")?), label(e))))
            .collect::<Result<Vec<_>, CliError>>()?;
        galilean_point_symmetries(&events, max_points, opts.tol)?
            .iter()
            .map(|g| (g.classify(), galilean_json(g)))
            .collect()
    } else {
        let space = space::<f64>(req, opts)?;
        let points = array(field(req, "points")?, "points")?
            .iter()
            .map(|p| Ok((vector::<f64>(field(p, "x")?, "x")?, label(p))))
            .collect::<Result<Vec<_>, CliError>>()?;
        affine_point_symmetries(&space, &points, max_points, opts.tol)?
            .into_iter()
            .map(|a| Ok((a.classify()?, Element::Affine(a).to_json())))
            .collect::<Result<_, CliError>>()?
    };
    let mut out = opts.mode();
    out.extend([
        ("group", json!(if galilean { "galilean" } else { "affine" })),
        ("count", json!(found.len())),
        ("achiral", json!(found.iter().any(|(c, _)| *c == Classification::Indirect))),
        (
            "symmetries",
            Value::Array(
                found
                    .into_iter()
                    .map(|(c, e)| object([("classification", json!(c.as_str())), ("element", e)]))
                    .collect(),
            ),
        ),
    ]);
    Ok(object(out))
}

/// Exact-mode entry points share the generic bodies.
pub fn dispatch(command: &str, req: &Value, opts: &Options) -> Result<Value, CliError> {
    match (command, opts.exact) {
        ("classify", false) => classify::<f64>(req, opts),
        ("classify", true) => classify::<Rational>(req, opts),
        ("decompose", false) => decompose::<f64>(req, opts),
        ("decompose", true) => decompose::<Rational>(req, opts),
        ("compose", false) => compose::<f64>(req, opts),
        ("compose", true) => compose::<Rational>(req, opts),
        ("oracle", false) => oracle::<f64>(req, opts),
        ("oracle", true) => oracle::<Rational>(req, opts),
        ("cone-demo", _) => cone_demo(req, opts),
        ("symmetries", _) => symmetries(req, opts),
        _ => Err(CliError::new("usage", format!("unknown command {command}"))),
    }
}
