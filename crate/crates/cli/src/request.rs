//! Request parsing.

use lindblad_split::linalg::ComplexMatrix;
use lindblad_split::{GeneratorSpec, KrausSet, Superoperator};
use serde_json::{Map, Value};

use crate::json;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Decompose,
    DecomposeCptp,
    Check,
    Kraus,
    Choi,
    WeightedTrace,
    InnerProduct,
    Demo,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Decompose => "decompose",
            Command::DecomposeCptp => "decompose-cptp",
            Command::Check => "check",
            Command::Kraus => "kraus",
            Command::Choi => "choi",
            Command::WeightedTrace => "weighted-trace",
            Command::InnerProduct => "inner-product",
            Command::Demo => "demo",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            Command::Decompose,
            Command::DecomposeCptp,
            Command::Check,
            Command::Kraus,
            Command::Choi,
            Command::WeightedTrace,
            Command::InnerProduct,
            Command::Demo,
        ]
        .into_iter()
        .find(|c| c.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlochInput {
    pub omega: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
}

impl Default for BlochInput {
    fn default() -> Self {
        Self {
            omega: 1.0,
            gamma1: 1.0,
            gamma2: 2.0,
            gamma3: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Demo {
    Bloch(BlochInput),
    Transpose,
    Depolarize { n: usize },
    Orthogonality { j: usize, k: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct JobRequest {
    pub command: Command,
    pub input: Option<GeneratorSpec>,
    pub other: Option<GeneratorSpec>,
    pub b: Option<ComplexMatrix>,
    pub tol: Option<f64>,
    pub demo: Option<Demo>,
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, CliError> {
    v.as_object()
        .ok_or_else(|| CliError::parse(path, "expected a JSON object"))
}

fn required<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value, CliError> {
    obj.get(key)
        .ok_or_else(|| CliError::parse(&format!("{path}.{key}"), "missing required field"))
}

fn optional_f64(obj: &Map<String, Value>, key: &str, path: &str) -> Result<Option<f64>, CliError> {
    match obj.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => match v.as_f64() {
            Some(x) if x.is_finite() => Ok(Some(x)),
            _ => Err(CliError::parse(&format!("{path}.{key}"), "expected a finite number")),
        },
    }
}

fn optional_index(obj: &Map<String, Value>, key: &str, path: &str) -> Result<Option<usize>, CliError> {
    match obj.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => v
            .as_u64()
            .map(|x| Some(x as usize))
            .ok_or_else(|| CliError::parse(&format!("{path}.{key}"), "expected a non-negative integer")),
    }
}

/// Parses a generator spec tagged by `"type"`: `gksl` (`H`, `lindblads`),
/// `kwedge` (`K0`, `kraus`) or `superop` (`L`).
pub fn parse_spec(v: &Value, path: &str) -> Result<GeneratorSpec, CliError> {
    let obj = object(v, path)?;
    let tag = required(obj, "type", path)?
        .as_str()
        .ok_or_else(|| CliError::parse(&format!("{path}.type"), "expected a string"))?;
    let list = |key: &str, n: usize| -> Result<KrausSet, CliError> {
        let ops = match obj.get(key) {
            None | Some(Value::Null) => Vec::new(),
            Some(v) => json::matrix_list(v, &format!("{path}.{key}"))?,
        };
        Ok(KrausSet::new(n, ops)?)
    };
    match tag {
        "gksl" => {
            let hamiltonian = json::square(required(obj, "H", path)?, &format!("{path}.H"))?;
            let lindblads = list("lindblads", hamiltonian.nrows())?;
            Ok(GeneratorSpec::Gksl { hamiltonian, lindblads })
        }
        "kwedge" => {
            let k0 = json::square(required(obj, "K0", path)?, &format!("{path}.K0"))?;
            let kraus = list("kraus", k0.nrows())?;
            Ok(GeneratorSpec::KWedge { k0, kraus })
        }
        "superop" => {
            let m = json::square(required(obj, "L", path)?, &format!("{path}.L"))?;
            Ok(GeneratorSpec::RawSuperop(Superoperator::new(m)?))
        }
        other => Err(CliError::parse(
            &format!("{path}.type"),
            &format!("unknown generator type {other:?} (expected gksl, kwedge or superop)"),
        )),
    }
}

fn parse_demo(obj: &Map<String, Value>) -> Result<Demo, CliError> {
    let name = required(obj, "demo_name", "$")?
        .as_str()
        .ok_or_else(|| CliError::parse("$.demo_name", "expected a string"))?;
    match name {
        "bloch" => {
            let mut p = BlochInput::default();
            if let Some(v) = obj.get("params") {
                let params = object(v, "$.params")?;
                let path = "$.params";
                p.omega = optional_f64(params, "omega", path)?.unwrap_or(p.omega);
                p.gamma1 = optional_f64(params, "gamma1", path)?.unwrap_or(p.gamma1);
                p.gamma2 = optional_f64(params, "gamma2", path)?.unwrap_or(p.gamma2);
                p.gamma3 = optional_f64(params, "gamma3", path)?.unwrap_or(p.gamma3);
            }
            Ok(Demo::Bloch(p))
        }
        "transpose" => Ok(Demo::Transpose),
        "depolarize" => Ok(Demo::Depolarize {
            n: optional_index(obj, "n", "$")?.unwrap_or(2),
        }),
        "orthogonality" => Ok(Demo::Orthogonality {
            j: optional_index(obj, "j", "$")?.unwrap_or(0),
            k: optional_index(obj, "k", "$")?.unwrap_or(1),
        }),
        other => Err(CliError::parse(
            "$.demo_name",
            &format!("unknown demo {other:?} (expected bloch, transpose, depolarize or orthogonality)"),
        )),
    }
}

/// Parses one request object.
pub fn parse_request_value(v: &Value) -> Result<JobRequest, CliError> {
    let obj = object(v, "$")?;
    let name = required(obj, "command", "$")?
        .as_str()
        .ok_or_else(|| CliError::parse("$.command", "expected a string"))?;
    let command = Command::parse(name)
        .ok_or_else(|| CliError::parse("$.command", &format!("unknown command {name:?}")))?;

    let tol = optional_f64(obj, "tol", "$")?;
    if let Some(t) = tol {
        if t <= 0.0 {
            return Err(CliError::parse("$.tol", "tolerance must be positive"));
        }
    }
    let b = match obj.get("B") {
        None | Some(Value::Null) => None,
        Some(v) => Some(json::square(v, "$.B")?),
    };
    let spec = |key: &str| -> Result<Option<GeneratorSpec>, CliError> {
        match obj.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(v) => parse_spec(v, &format!("$.{key}")).map(Some),
        }
    };
    let input = spec("input")?;
    let other = spec("other")?;

    let needs_input = command != Command::Demo;
    let needs_b = matches!(
        command,
        Command::Decompose | Command::DecomposeCptp | Command::WeightedTrace | Command::InnerProduct
    );
    if needs_input && input.is_none() {
        return Err(CliError::parse("$.input", "missing required field"));
    }
    if needs_b && b.is_none() {
        return Err(CliError::parse("$.B", "missing required field"));
    }
    if command == Command::InnerProduct && other.is_none() {
        return Err(CliError::parse("$.other", "missing required field"));
    }
    let demo = if command == Command::Demo {
        Some(parse_demo(obj)?)
    } else {
        None
    };

    let n = input.as_ref().map(|s| s.dim());
    for (what, dim) in [
        ("$.B", b.as_ref().map(|m| m.nrows())),
        ("$.other", other.as_ref().map(|s| s.dim())),
    ] {
        if let (Some(n), Some(d)) = (n, dim) {
            if n != d {
                return Err(CliError::Dimension(format!(
                    "{what}: dimension {d} does not match input dimension {n}"
                )));
            }
        }
    }

    Ok(JobRequest {
        command,
        input,
        other,
        b,
        tol,
        demo,
    })
}

/// Parses a request document from raw bytes.
pub fn parse_request(bytes: &[u8]) -> Result<JobRequest, CliError> {
    parse_request_value(&parse_document(bytes)?)
}

pub fn parse_document(bytes: &[u8]) -> Result<Value, CliError> {
    serde_json::from_slice(bytes).map_err(|e| CliError::Parse {
        path: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })
}

/// The canonical name of a known command, for labelling failed requests.
pub fn command_name(s: &str) -> Option<&'static str> {
    Command::parse(s).map(Command::name)
}
