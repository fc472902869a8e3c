//! JSON interchange for matrices and circuits.
//!
//! Matrix: `{"domain": "real"|"complex"|"quaternion", "rows": n, "cols": m,
//! "entries": [row-major scalars]}`.
//!
//! Circuit: `{"domain": …, "width": n, "gates": [{"id": k, "wires": [1-based],
//! "matrix": … | "builtin": name}], "sigma": [ids]?}`. A gate matrix may also
//! be given as an array of rows. Wires are 1-based on disk only.

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::circuit::{builtin, Circuit, Gate, GateId, OrderedCircuit, GATE_TOL};
use crate::embed::CompiledCircuit;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Domain, Quaternion, Scalar};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn matrix_to_json<D: Scalar>(m: &Matrix<D>) -> Value {
    json!({
        "domain": D::DOMAIN.name(),
        "rows": m.rows(),
        "cols": m.cols(),
        "entries": m.entries().iter().map(|&x| x.to_json()).collect::<Vec<_>>(),
    })
}

/// Reads a matrix as `D`. Entries written in a narrower domain are lifted.
pub fn matrix_from_json<D: Scalar>(v: &Value) -> Result<Matrix<D>> {
    if let Some(rows) = v.as_array() {
        let rows = rows
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| parse_err("matrix rows must be arrays"))?
                    .iter()
                    .map(scalar_from_json::<D>)
                    .collect::<Result<Vec<D>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        return Matrix::from_rows(rows).map_err(|e| parse_err(e.to_string()));
    }
    let obj = v
        .as_object()
        .ok_or_else(|| parse_err("matrix must be an object or array of rows"))?;
    if let Some(d) = obj.get("domain") {
        let d = d
            .as_str()
            .and_then(Domain::from_name)
            .ok_or_else(|| parse_err(format!("unknown matrix domain {d}")))?;
        if d > D::DOMAIN {
            return Err(parse_err(format!("{d} matrix in a {} context", D::DOMAIN)));
        }
    }
    let rows = get_usize(obj, "rows")?;
    let cols = get_usize(obj, "cols")?;
    let entries = obj
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("matrix needs an \"entries\" array"))?
        .iter()
        .map(scalar_from_json::<D>)
        .collect::<Result<Vec<D>>>()?;
    Matrix::from_vec(rows, cols, entries).map_err(|e| parse_err(e.to_string()))
}

/// Accepts any narrower encoding: a bare real, `[re, im]`, or `[re, i, j, k]`.
fn scalar_from_json<D: Scalar>(v: &Value) -> Result<D> {
    let q = if let Some(x) = v.as_f64() {
        Some(Quaternion::from_real(x))
    } else {
        match v.as_array().map(Vec::len) {
            Some(2) => Complex64::from_json(v).map(Quaternion::from_complex),
            Some(4) => Quaternion::from_json(v),
            _ => None,
        }
    };
    q.and_then(D::try_from_quaternion)
        .ok_or_else(|| parse_err(format!("{v} is not a {} scalar", D::DOMAIN)))
}

fn get_usize(obj: &Map<String, Value>, key: &str) -> Result<usize> {
    obj.get(key)
        .and_then(Value::as_u64)
        .map(|x| x as usize)
        .ok_or_else(|| parse_err(format!("missing or invalid \"{key}\"")))
}

/// A parsed circuit file in its declared domain.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitFile<D> {
    pub circuit: Circuit<D>,
    pub sigma: Option<Vec<GateId>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnyCircuit {
    Real(CircuitFile<f64>),
    Complex(CircuitFile<Complex64>),
    Quaternion(CircuitFile<Quaternion>),
}

impl AnyCircuit {
    pub fn domain(&self) -> Domain {
        match self {
            AnyCircuit::Real(_) => Domain::Real,
            AnyCircuit::Complex(_) => Domain::Complex,
            AnyCircuit::Quaternion(_) => Domain::Quaternion,
        }
    }
}

/// Reads the domain header first and dispatches.
pub fn parse_circuit(text: &str, tol: f64) -> Result<AnyCircuit> {
    let v: Value = serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?;
    let domain = v
        .get("domain")
        .and_then(Value::as_str)
        .and_then(Domain::from_name)
        .ok_or_else(|| parse_err("circuit needs \"domain\": real, complex or quaternion"))?;
    Ok(match domain {
        Domain::Real => AnyCircuit::Real(circuit_from_json(&v, tol)?),
        Domain::Complex => AnyCircuit::Complex(circuit_from_json(&v, tol)?),
        Domain::Quaternion => AnyCircuit::Quaternion(circuit_from_json(&v, tol)?),
    })
}

pub fn circuit_from_json<D: Scalar>(v: &Value, tol: f64) -> Result<CircuitFile<D>> {
    let obj = v
        .as_object()
        .ok_or_else(|| parse_err("circuit must be an object"))?;
    let width = get_usize(obj, "width")?;
    let gates = obj
        .get("gates")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("circuit needs a \"gates\" array"))?
        .iter()
        .map(gate_from_json::<D>)
        .collect::<Result<Vec<_>>>()?;
    let sigma = match obj.get("sigma") {
        None | Some(Value::Null) => None,
        Some(s) => Some(
            s.as_array()
                .ok_or_else(|| parse_err("\"sigma\" must be an array of gate ids"))?
                .iter()
                .map(|x| {
                    x.as_u64()
                        .ok_or_else(|| parse_err("gate ids must be non-negative integers"))
                })
                .collect::<Result<Vec<_>>>()?,
        ),
    };
    let circuit = Circuit::with_tolerance(width, gates, tol)?;
    Ok(CircuitFile { circuit, sigma })
}

fn gate_from_json<D: Scalar>(v: &Value) -> Result<Gate<D>> {
    let obj = v
        .as_object()
        .ok_or_else(|| parse_err("gate must be an object"))?;
    let id = obj
        .get("id")
        .and_then(Value::as_u64)
        .ok_or_else(|| parse_err("gate needs a non-negative integer \"id\""))?;
    let wires = obj
        .get("wires")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err(format!("gate {id} needs a \"wires\" array")))?
        .iter()
        .map(|w| match w.as_u64() {
            Some(w) if w >= 1 => Ok(w as usize - 1),
            _ => Err(parse_err(format!("gate {id}: wires are 1-based integers"))),
        })
        .collect::<Result<Vec<_>>>()?;
    let matrix = match (obj.get("matrix"), obj.get("builtin")) {
        (Some(m), None) => matrix_from_json(m)?,
        (None, Some(b)) => {
            let name = b
                .as_str()
                .ok_or_else(|| parse_err(format!("gate {id}: builtin must be a string")))?;
            builtin::<D>(name).ok_or_else(|| {
                parse_err(format!("gate {id}: no {} builtin named {name}", D::DOMAIN))
            })?
        }
        _ => {
            return Err(parse_err(format!(
                "gate {id} needs exactly one of \"matrix\" or \"builtin\""
            )))
        }
    };
    Ok(Gate::new(id, wires, matrix))
}

fn gate_json<D: Scalar>(g: &Gate<D>) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("id".into(), json!(g.id));
    m.insert(
        "wires".into(),
        json!(g.wires.iter().map(|w| w + 1).collect::<Vec<_>>()),
    );
    m.insert("matrix".into(), matrix_to_json(&g.matrix));
    m
}

/// Writes a circuit, including σ when given.
pub fn circuit_to_json<D: Scalar>(circuit: &Circuit<D>, sigma: Option<&[GateId]>) -> Value {
    let gates: Vec<Value> = circuit
        .gates()
        .iter()
        .map(|g| Value::Object(gate_json(g)))
        .collect();
    let mut out = json!({
        "domain": D::DOMAIN.name(),
        "width": circuit.width(),
        "gates": gates,
    });
    if let Some(s) = sigma {
        out["sigma"] = json!(s);
    }
    out
}

/// Compiled circuit with per-gate provenance; parses back as a plain circuit.
pub fn compiled_to_json<L: Scalar>(cc: &CompiledCircuit<L>) -> Value {
    let circuit = cc.circuit.circuit();
    let gates: Vec<Value> = circuit
        .gates()
        .iter()
        .zip(&cc.provenance)
        .map(|(g, p)| {
            let mut m = gate_json(g);
            m.insert("source_gate".into(), json!(p.source_gate));
            m.insert("embedding".into(), json!(p.embedding.name()));
            m.insert("top_wire_used".into(), json!(p.top_wire_used));
            Value::Object(m)
        })
        .collect();
    json!({
        "domain": L::DOMAIN.name(),
        "width": circuit.width(),
        "gates": gates,
        "sigma": cc.circuit.sigma(),
        "embedding": cc.embedding.name(),
        "source_width": cc.source_width,
        "top_wires": cc.top_wires(),
    })
}

/// Parses with the default gate tolerance.
pub fn parse_circuit_default(text: &str) -> Result<AnyCircuit> {
    parse_circuit(text, GATE_TOL)
}

/// Attaches σ from the file, or the default order when absent.
pub fn ordered<D: Scalar>(file: CircuitFile<D>) -> Result<OrderedCircuit<D>> {
    match file.sigma {
        Some(s) => OrderedCircuit::new(file.circuit, s),
        None => OrderedCircuit::with_default_order(file.circuit),
    }
}
