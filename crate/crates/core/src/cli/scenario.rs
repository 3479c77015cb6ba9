//! Scenario files: JSON descriptions of an action, a cutoff and the optional
//! subgroup and chart data used by the checks.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Deserialize;
use serde_json::Value;

use crate::algebra::{Matrix, MinimalPolynomial, Scalar};
use crate::circle::CircleWeights;
use crate::error::{Error, Result};
use crate::exterior::LinearVectorField;

fn config(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    name: Option<String>,
    #[serde(default)]
    field: Option<Value>,
    finite: Option<RawFinite>,
    circle: Option<RawCircle>,
    cutoff: Option<usize>,
    subgroup: Option<RawSubgroup>,
    charts: Option<RawCharts>,
    format: Option<String>,
    seed: Option<u64>,
    samples: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFinite {
    generators: Vec<Vec<Vec<Value>>>,
    max_order: Option<usize>,
    #[serde(default)]
    lie_generators: Vec<Vec<Vec<Value>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCircle {
    weights: Vec<i64>,
    #[serde(default)]
    fixed_dims: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSubgroup {
    #[serde(default)]
    generators: Vec<usize>,
    #[serde(default)]
    representation: Vec<Vec<Vec<Value>>>,
    slice_dim: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCharts {
    charts: Vec<RawChart>,
    #[serde(default)]
    transfers: Vec<RawTransfer>,
    #[serde(default)]
    cocycles: Vec<[String; 3]>,
    #[serde(default)]
    equal_pairs: Vec<[String; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawChart {
    name: String,
    dim: usize,
    components: Vec<Vec<Vec<Value>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTransfer {
    name: Option<String>,
    from: String,
    to: String,
    embedding: Vec<Vec<Value>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Field {
    Rational,
    Extension(Arc<MinimalPolynomial>),
}

#[derive(Clone, Debug)]
pub enum ActionSpec {
    Finite {
        generators: Vec<Matrix>,
        max_order: usize,
        lie_generators: Vec<LinearVectorField>,
    },
    Circle(CircleWeights),
}

#[derive(Clone, Debug)]
pub struct SubgroupSpec {
    /// Indices into the generator list of the group.
    pub generators: Vec<usize>,
    pub representation: Vec<Matrix>,
    pub slice_dim: usize,
}

#[derive(Clone, Debug)]
pub struct ChartSpec {
    pub name: String,
    pub dim: usize,
    pub components: Vec<Vec<Vec<Scalar>>>,
}

#[derive(Clone, Debug)]
pub struct TransferSpec {
    pub name: String,
    pub from: String,
    pub to: String,
    pub embedding: Matrix,
}

#[derive(Clone, Debug, Default)]
pub struct ChartsSpec {
    pub charts: Vec<ChartSpec>,
    pub transfers: Vec<TransferSpec>,
    pub cocycles: Vec<[String; 3]>,
    pub equal_pairs: Vec<[String; 2]>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Table,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "table" => Ok(Format::Table),
            other => Err(config(format!("unknown format {other:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub field: Field,
    pub action: ActionSpec,
    pub cutoff: usize,
    pub subgroup: Option<SubgroupSpec>,
    pub charts: Option<ChartsSpec>,
    pub format: Format,
    pub seed: u64,
    pub samples: usize,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawScenario = serde_json::from_str(text).map_err(|e| config(format!("invalid scenario: {e}")))?;
        let field = parse_field(raw.field.as_ref())?;
        let action = match (raw.finite, raw.circle) {
            (Some(f), None) => {
                let generators = f
                    .generators
                    .iter()
                    .map(|m| parse_matrix(m, &field))
                    .collect::<Result<Vec<_>>>()?;
                if generators.is_empty() {
                    return Err(config("finite action needs at least one generator"));
                }
                let n = generators[0].rows();
                if generators.iter().any(|g| !g.is_square() || g.rows() != n) {
                    return Err(config("generators must be square matrices of one size"));
                }
                let lie_generators = f
                    .lie_generators
                    .iter()
                    .map(|m| {
                        let m = parse_matrix(m, &field)?;
                        if !m.is_square() || m.rows() != n {
                            return Err(config("Lie generators must match the generator size"));
                        }
                        LinearVectorField::new(m)
                    })
                    .collect::<Result<Vec<_>>>()?;
                ActionSpec::Finite {
                    generators,
                    max_order: f.max_order.unwrap_or(crate::action::DEFAULT_GROUP_BOUND),
                    lie_generators,
                }
            }
            (None, Some(c)) => {
                ActionSpec::Circle(CircleWeights::new(c.weights, c.fixed_dims).map_err(|e| config(e.to_string()))?)
            }
            _ => return Err(config("exactly one of \"finite\" and \"circle\" must be given")),
        };
        let cutoff = raw.cutoff.unwrap_or(4);
        if cutoff < 1 {
            return Err(config("cutoff must be at least 1"));
        }
        let subgroup = raw
            .subgroup
            .map(|s| {
                let ActionSpec::Finite { generators, .. } = &action else {
                    return Err(config("a subgroup needs a finite action"));
                };
                if s.generators.iter().any(|&i| i >= generators.len()) {
                    return Err(config("subgroup generator index out of range"));
                }
                let representation = s
                    .representation
                    .iter()
                    .map(|m| parse_matrix(m, &field))
                    .collect::<Result<Vec<_>>>()?;
                if representation.len() != s.generators.len() {
                    return Err(config("one representation matrix per subgroup generator is required"));
                }
                let slice_dim = match (representation.first(), s.slice_dim) {
                    (Some(m), Some(d)) if m.rows() != d => {
                        return Err(config("slice_dim disagrees with the representation"));
                    }
                    (Some(m), _) => m.rows(),
                    (None, Some(d)) => d,
                    (None, None) => return Err(config("slice_dim is required when the subgroup has no generators")),
                };
                Ok(SubgroupSpec {
                    generators: s.generators,
                    representation,
                    slice_dim,
                })
            })
            .transpose()?;
        let charts = raw.charts.map(|c| parse_charts(c, &field)).transpose()?;
        let format = raw.format.as_deref().map(str::parse).transpose()?.unwrap_or_default();
        Ok(Self {
            name: raw.name.unwrap_or_else(|| "scenario".into()),
            field,
            action,
            cutoff,
            subgroup,
            charts,
            format,
            seed: raw.seed.unwrap_or(0),
            samples: raw.samples.unwrap_or(100),
        })
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

fn parse_field(v: Option<&Value>) -> Result<Field> {
    match v {
        None => Ok(Field::Rational),
        Some(Value::String(s)) if s == "rational" => Ok(Field::Rational),
        Some(Value::Object(o)) => {
            let ext = o
                .get("extension")
                .and_then(|e| e.get("minimal_polynomial"))
                .and_then(Value::as_array)
                .ok_or_else(|| {
                    config("field must be \"rational\" or {\"extension\": {\"minimal_polynomial\": [...]}}")
                })?;
            let coeffs = ext
                .iter()
                .map(|c| match parse_scalar(c, &Field::Rational)? {
                    Scalar::Rational(r) => Ok(r),
                    Scalar::Algebraic(_) => Err(config("minimal polynomial coefficients must be rational")),
                })
                .collect::<Result<Vec<_>>>()?;
            let m = MinimalPolynomial::new(coeffs).map_err(|e| config(e.to_string()))?;
            Ok(Field::Extension(Arc::new(m)))
        }
        Some(other) => Err(config(format!("unknown field {other}"))),
    }
}

/// A scalar: `"p/q"`, an integer, or (in an extension field) a list of
/// power-basis coefficients.
pub fn parse_scalar(v: &Value, field: &Field) -> Result<Scalar> {
    match v {
        Value::String(s) => Ok(Scalar::Rational(
            Scalar::parse_rational(s).map_err(|e| config(e.to_string()))?,
        )),
        Value::Number(n) => n
            .as_i64()
            .map(Scalar::from_int)
            .ok_or_else(|| config(format!("scalar {n} must be an integer or a \"p/q\" string"))),
        Value::Array(items) => {
            let Field::Extension(m) = field else {
                return Err(config("coefficient lists need an extension field"));
            };
            if items.len() > m.degree() {
                return Err(config("too many coefficients for the extension degree"));
            }
            let coeffs = items
                .iter()
                .map(|c| match parse_scalar(c, &Field::Rational)? {
                    Scalar::Rational(r) => Ok(r),
                    Scalar::Algebraic(_) => Err(config("nested coefficient lists are not allowed")),
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Scalar::algebraic(coeffs, m))
        }
        other => Err(config(format!("invalid scalar {other}"))),
    }
}

pub fn parse_matrix(rows: &[Vec<Value>], field: &Field) -> Result<Matrix> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(config("matrix rows have different lengths"));
    }
    let data = rows
        .iter()
        .map(|r| r.iter().map(|x| parse_scalar(x, field)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(cols, data).map_err(|e| config(e.to_string()))
}

fn parse_charts(raw: RawCharts, field: &Field) -> Result<ChartsSpec> {
    let mut names = BTreeSet::new();
    let mut charts = Vec::new();
    for c in raw.charts {
        if !names.insert(c.name.clone()) {
            return Err(config(format!("duplicate chart {:?}", c.name)));
        }
        let components = c
            .components
            .iter()
            .map(|comp| {
                comp.iter()
                    .map(|v| {
                        if v.len() != c.dim {
                            return Err(config(format!("chart {:?}: vector of the wrong length", c.name)));
                        }
                        v.iter().map(|x| parse_scalar(x, field)).collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        charts.push(ChartSpec {
            name: c.name,
            dim: c.dim,
            components,
        });
    }
    let mut transfer_names = BTreeSet::new();
    let mut transfers = Vec::new();
    for t in raw.transfers {
        for end in [&t.from, &t.to] {
            if !names.contains(end) {
                return Err(config(format!("transfer refers to unknown chart {end:?}")));
            }
        }
        let name = t.name.unwrap_or_else(|| format!("{}->{}", t.from, t.to));
        if !transfer_names.insert(name.clone()) {
            return Err(config(format!("duplicate transfer {name:?}")));
        }
        let embedding = parse_matrix(&t.embedding, field)?;
        transfers.push(TransferSpec {
            name,
            from: t.from,
            to: t.to,
            embedding,
        });
    }
    for pair in &raw.equal_pairs {
        for n in pair {
            if !transfer_names.contains(n) {
                return Err(config(format!("equal_pairs refers to unknown transfer {n:?}")));
            }
        }
    }
    for triple in &raw.cocycles {
        for n in triple {
            if !names.contains(n) {
                return Err(config(format!("cocycle refers to unknown chart {n:?}")));
            }
        }
    }
    Ok(ChartsSpec {
        charts,
        transfers,
        cocycles: raw.cocycles,
        equal_pairs: raw.equal_pairs,
    })
}
