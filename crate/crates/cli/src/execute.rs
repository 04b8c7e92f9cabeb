//! Request dispatch and result serialization.

use lindblad_split::casework::{
    bloch_generator, bloch_hermitian_dissipator, bloch_reference_parts, depolarizing_exclusion,
    orthogonality_counterexample, transpose_criterion, transpose_decomposition, BlochParams,
};
use lindblad_split::linalg::{self, c, frobenius, is_hermitian, ComplexMatrix};
use lindblad_split::weighted::{b_inner, in_cp_b};
use lindblad_split::{
    build_generator, decompose, decompose_cptp, validate_cp_wedge, Decomposition, Error,
    Superoperator, WeightMatrix, DEFAULT_TOL,
};
use serde_json::{json, Map, Value};

use crate::json::{c_to_json, kraus_to_json, mat_to_json, real, superop_to_json};
use crate::request::{Command, Demo, JobRequest};
use crate::CliError;

pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Ok,
    NotInWedge,
    HypothesisViolated,
    InvalidInput,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::NotInWedge => "not-in-wedge",
            Status::HypothesisViolated => "hypothesis-violated",
            Status::InvalidInput => "invalid-input",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::NotInWedge => 2,
            Status::HypothesisViolated => 3,
            Status::InvalidInput => 4,
        }
    }
}

/// Which status an error maps to.
pub fn classify(e: &CliError) -> Status {
    match e {
        CliError::Parse { .. } | CliError::Dimension(_) => Status::InvalidInput,
        CliError::Core(e) => match e {
            Error::Dimension(_) | Error::NotHermitian { .. } | Error::InvalidState(_) => {
                Status::InvalidInput
            }
            Error::NotInWedge { .. } | Error::NotHermitianPreserving { .. } => Status::NotInWedge,
            Error::NotCp { .. }
            | Error::NotPositiveDefinite { .. }
            | Error::Weight(_)
            | Error::ZeroWeight
            | Error::InvalidWeight(_)
            | Error::NotTracePreserving { .. }
            | Error::InvalidParameter(_)
            | Error::Postcondition { .. } => Status::HypothesisViolated,
        },
    }
}

fn error_kind(e: &CliError) -> &'static str {
    match e {
        CliError::Parse { .. } => "parse",
        CliError::Dimension(_) => "dimension",
        CliError::Core(e) => match e {
            Error::Dimension(_) => "dimension",
            Error::NotHermitian { .. } => "not-hermitian",
            Error::NotCp { .. } => "not-cp",
            Error::NotPositiveDefinite { .. } => "not-positive-definite",
            Error::InvalidState(_) => "invalid-state",
            Error::Weight(_) => "weight",
            Error::ZeroWeight => "zero-weight",
            Error::InvalidWeight(_) => "invalid-weight",
            Error::NotInWedge { .. } => "not-in-wedge",
            Error::NotHermitianPreserving { .. } => "not-hermitian-preserving",
            Error::NotTracePreserving { .. } => "not-trace-preserving",
            Error::InvalidParameter(_) => "invalid-parameter",
            Error::Postcondition { .. } => "postcondition",
        },
    }
}

fn error_numbers(e: &CliError) -> Value {
    let CliError::Core(e) = e else {
        return json!({});
    };
    match e {
        Error::NotHermitian { residual, bound }
        | Error::NotHermitianPreserving { residual, bound }
        | Error::NotTracePreserving { residual, bound } => {
            json!({"residual": real(*residual), "bound": real(*bound)})
        }
        Error::NotCp { min_eig, bound } | Error::NotInWedge { min_eig, bound } => {
            json!({"min_eig": real(*min_eig), "bound": real(*bound)})
        }
        Error::NotPositiveDefinite { min_eig } => json!({"min_eig": real(*min_eig)}),
        Error::Postcondition { what, value, bound } => {
            json!({"postcondition": what, "value": real(*value), "bound": real(*bound)})
        }
        _ => json!({}),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JobResult {
    pub status: Status,
    pub command: Option<&'static str>,
    pub tol: f64,
    pub payload: Value,
    pub diagnostics: Value,
    pub error: Option<String>,
}

impl JobResult {
    pub fn failure(command: Option<&'static str>, tol: f64, e: &CliError, payload: Value) -> Self {
        let mut diagnostics = Map::new();
        diagnostics.insert("error_kind".into(), json!(error_kind(e)));
        if let Value::Object(extra) = error_numbers(e) {
            diagnostics.extend(extra);
        }
        diagnostics.insert("tol".into(), real(tol));
        Self {
            status: classify(e),
            command,
            tol,
            payload,
            diagnostics: Value::Object(diagnostics),
            error: Some(e.to_string()),
        }
    }

    pub fn to_json(&self) -> Value {
        let mut out = Map::new();
        out.insert("status".into(), json!(self.status.as_str()));
        out.insert(
            "command".into(),
            self.command.map_or(Value::Null, |c| json!(c)),
        );
        out.insert("tol".into(), real(self.tol));
        out.insert("payload".into(), self.payload.clone());
        out.insert("diagnostics".into(), self.diagnostics.clone());
        if let Some(e) = &self.error {
            out.insert("error".into(), json!(e));
        }
        Value::Object(out)
    }

    /// One human-readable line for stderr.
    pub fn summary(&self) -> String {
        let cmd = self.command.unwrap_or("?");
        match &self.error {
            Some(e) => format!("{cmd}: {} ({e})", self.status.as_str()),
            None => format!("{cmd}: {}", self.status.as_str()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Options {
    /// Used when the request has no `tol` of its own.
    pub tol: Option<f64>,
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            tol: None,
            seed: DEFAULT_SEED,
        }
    }
}

struct Outcome {
    status: Status,
    payload: Value,
    diagnostics: Value,
}

impl Outcome {
    fn ok(payload: Value, diagnostics: Value) -> Self {
        Self {
            status: Status::Ok,
            payload,
            diagnostics,
        }
    }
}

/// An error plus whatever partial payload was computed before it.
struct Failure {
    error: CliError,
    payload: Value,
}

impl<E: Into<CliError>> From<E> for Failure {
    fn from(e: E) -> Self {
        Self {
            error: e.into(),
            payload: Value::Null,
        }
    }
}

pub fn execute(req: &JobRequest, opts: &Options) -> JobResult {
    let tol = req.tol.or(opts.tol).unwrap_or(DEFAULT_TOL);
    let command = Some(req.command.name());
    match run(req, tol, opts.seed) {
        Ok(o) => {
            let mut diagnostics = match o.diagnostics {
                Value::Object(m) => m,
                _ => Map::new(),
            };
            diagnostics.insert("tol".into(), real(tol));
            JobResult {
                status: o.status,
                command,
                tol,
                payload: o.payload,
                diagnostics: Value::Object(diagnostics),
                error: None,
            }
        }
        Err(f) => JobResult::failure(command, tol, &f.error, f.payload),
    }
}

fn input(req: &JobRequest, tol: f64) -> Result<Superoperator, Failure> {
    let spec = req.input.as_ref().expect("validated at parse time");
    Ok(build_generator(spec, tol)?)
}

fn weight(req: &JobRequest) -> Result<WeightMatrix, Failure> {
    let b = req.b.clone().expect("validated at parse time");
    Ok(WeightMatrix::new(b)?)
}

fn eigenvalues(values: &[f64]) -> Value {
    Value::Array(values.iter().map(|&x| real(x)).collect())
}

fn decomposition_json(d: &Decomposition, tol: f64) -> Result<(Map<String, Value>, Value), Failure> {
    let eig = d.phi_choi.eig(tol)?;
    let mut payload = Map::new();
    payload.insert("K".into(), mat_to_json(&d.k));
    payload.insert("H".into(), mat_to_json(&d.h()));
    payload.insert("Z".into(), mat_to_json(&d.z()));
    payload.insert("kraus".into(), kraus_to_json(&d.phi_kraus));
    payload.insert("phi".into(), superop_to_json(&d.phi));
    payload.insert("phi_choi_eigenvalues".into(), eigenvalues(&eig.values));
    let g = &d.diagnostics;
    let diagnostics = json!({
        "reconstruction_residual": real(g.reconstruction_residual),
        "choi_min_eig": real(g.choi_min_eig),
        "choi_max_eig": real(g.choi_max_eig),
        "weighted_trace_abs": real(g.weighted_trace_abs),
        "im_tr_bk_abs": real(g.im_trbk_abs),
        "kernel_residual": real(g.kernel_residual),
        "choi_rank": g.choi_rank,
    });
    Ok((payload, diagnostics))
}

fn run(req: &JobRequest, tol: f64, seed: u64) -> Result<Outcome, Failure> {
    match req.command {
        Command::Decompose => {
            let l = input(req, tol)?;
            let d = decompose(&l, &weight(req)?, tol)?;
            let (payload, diagnostics) = decomposition_json(&d, tol)?;
            Ok(Outcome::ok(Value::Object(payload), diagnostics))
        }
        Command::DecomposeCptp => {
            let l = input(req, tol)?;
            let d = decompose_cptp(&l, &weight(req)?, tol)?;
            let (mut payload, mut diagnostics) = decomposition_json(&d.decomposition, tol)?;
            payload.insert("H".into(), mat_to_json(&d.h));
            payload.insert(
                "hermitian_weight_trace".into(),
                d.hermitian_weight_trace.map_or(Value::Null, c_to_json),
            );
            let extra = diagnostics.as_object_mut().expect("object");
            extra.insert("anticommutator_residual".into(), real(d.anticommutator_residual));
            extra.insert("coro_condition_residual".into(), real(d.coro_condition_residual));
            Ok(Outcome::ok(Value::Object(payload), diagnostics))
        }
        Command::Check => {
            let l = input(req, tol)?;
            let r = validate_cp_wedge(&l, tol);
            let payload = json!({
                "member": r.member,
                "hermitian_preserving": r.hermitian_preserving,
                "conditionally_cp": r.conditionally_cp,
                "conditional_min_eig": real(r.conditional_min_eig),
                "decomposition_min_eig": r.decomposition_min_eig.map_or(Value::Null, real),
                "trace_preserving": l.is_trace_annihilating(tol),
            });
            let diagnostics = json!({
                "hermiticity_residual": real(r.hermiticity_residual),
                "trace_annihilation_residual": real(l.trace_annihilation_residual()),
            });
            Ok(Outcome {
                status: if r.member { Status::Ok } else { Status::NotInWedge },
                payload,
                diagnostics,
            })
        }
        Command::Kraus => {
            let phi = input(req, tol)?;
            let choi = phi.choi();
            let ks = choi.kraus(tol)?;
            let rebuilt = Superoperator::from_kraus(&ks);
            let payload = json!({
                "kraus": kraus_to_json(&ks),
                "rank": ks.len(),
                "choi_eigenvalues": eigenvalues(&choi.eig(tol)?.values),
            });
            let diagnostics = json!({
                "reconstruction_residual": real(frobenius(&(rebuilt.matrix() - phi.matrix()))),
            });
            Ok(Outcome::ok(payload, diagnostics))
        }
        Command::Choi => {
            let phi = input(req, tol)?;
            let choi = phi.choi();
            let cp = choi.cp_check(tol);
            let values = match choi.eig(tol) {
                Ok(e) => eigenvalues(&e.values),
                Err(_) => Value::Null,
            };
            let payload = json!({
                "choi": mat_to_json(choi.matrix()),
                "eigenvalues": values,
                "hermitian": phi.is_hermitian_preserving(tol),
                "cp": cp.is_cp,
            });
            let diagnostics = json!({
                "hermiticity_residual": real(cp.hermiticity_residual),
                "min_eig": real(cp.min_eig),
                "max_eig": real(cp.max_eig),
            });
            Ok(Outcome::ok(payload, diagnostics))
        }
        Command::WeightedTrace => {
            let phi = input(req, tol)?;
            let r = in_cp_b(&phi, &weight(req)?, tol)?;
            let payload = json!({
                "weighted_trace": c_to_json(r.weighted_trace),
                "member": r.member,
                "cp": r.cp.is_cp,
                "kraus_overlaps": r.kraus_overlaps.iter().map(|&z| c_to_json(z)).collect::<Vec<_>>(),
            });
            let diagnostics = json!({
                "kernel_residual": real(r.kernel_residual),
                "choi_norm": real(r.choi_norm),
                "choi_min_eig": real(r.cp.min_eig),
            });
            Ok(Outcome::ok(payload, diagnostics))
        }
        Command::InnerProduct => {
            let phi = input(req, tol)?;
            let other = req.other.as_ref().expect("validated at parse time");
            let psi = build_generator(other, tol)?;
            let b = weight(req)?;
            let value = b_inner(&phi, &psi, &b, tol)?;
            Ok(Outcome::ok(json!({ "value": c_to_json(value) }), json!({})))
        }
        Command::Demo => run_demo(req, tol, seed),
    }
}

fn run_demo(req: &JobRequest, tol: f64, seed: u64) -> Result<Outcome, Failure> {
    match req.demo.as_ref().expect("validated at parse time") {
        Demo::Bloch(p) => {
            let p = BlochParams::new(p.omega, p.gamma1, p.gamma2, p.gamma3)?;
            let b = req.b.clone().unwrap_or_else(|| linalg::identity(2));
            let l = bloch_generator(&p);
            let built = build_generator(&p.spec(), tol)?;
            let d = decompose_cptp(&l, &WeightMatrix::new(b.clone())?, tol)?;
            let parts = bloch_reference_parts(&p, &b, tol)?;
            let gamma = d.dissipative_part();
            let mut payload = json!({
                "generator": superop_to_json(&l),
                "H": mat_to_json(&d.h),
                "K": mat_to_json(&d.decomposition.k),
                "kraus": kraus_to_json(&d.decomposition.phi_kraus),
                "hamiltonian_part": superop_to_json(&parts.hamiltonian),
                "dissipative_part": superop_to_json(&parts.dissipator),
            });
            let mut diagnostics = json!({
                "printed_vs_built": real((l.matrix() - built.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max)),
                "hamiltonian_part_residual":
                    real(frobenius(&(parts.hamiltonian.matrix() - d.hamiltonian_part().matrix()))),
                "dissipative_part_residual":
                    real(frobenius(&(parts.dissipator.matrix() - gamma.matrix()))),
            });
            if is_hermitian(&b, tol) {
                let s = bloch_hermitian_dissipator(&p, &b, tol)?;
                payload["hermitian_dissipative_part"] = superop_to_json(&s);
                diagnostics["hermitian_form_residual"] =
                    real(frobenius(&(s.matrix() - gamma.matrix())));
            }
            Ok(Outcome::ok(payload, diagnostics))
        }
        Demo::Transpose => {
            let b = req.b.clone().unwrap_or_else(|| {
                linalg::from_rows(&[vec![c(1.0, 0.0), c(0.0, 1.0)], vec![c(0.0, -1.0), c(1.0, 0.0)]])
            });
            let criterion = transpose_criterion(&b);
            let out = transpose_decomposition(&b, tol, seed).map_err(|e| Failure {
                error: e.into(),
                payload: json!({ "criterion": real(criterion) }),
            })?;
            let (payload, diagnostics) = match &out.decomposition {
                None => (
                    json!({"criterion": real(out.criterion), "decomposable": false}),
                    json!({}),
                ),
                Some(d) => (
                    json!({
                        "criterion": real(out.criterion),
                        "decomposable": true,
                        "K": mat_to_json(&d.k),
                        "phi": superop_to_json(&d.phi),
                        "identity_weight": real(d.identity_weight),
                        "weighted_trace": c_to_json(d.weighted_trace),
                    }),
                    json!({
                        "recomposition_residual": real(d.recomposition_residual),
                        "sampled_min_eig": real(d.sampled_min_eig),
                        "samples": d.samples,
                        "seed": seed,
                    }),
                ),
            };
            Ok(Outcome::ok(payload, diagnostics))
        }
        Demo::Depolarize { n } => {
            let (n, b) = match &req.b {
                Some(b) => (b.nrows(), b.clone()),
                None => (*n, linalg::identity(*n)),
            };
            if n == 0 {
                return Err(CliError::Dimension("$.n: dimension must be positive".into()).into());
            }
            let r = depolarizing_exclusion(&b, n, tol)?;
            let payload = json!({
                "excluded": r.excluded,
                "weighted_trace": c_to_json(r.weighted_trace),
                "kraus_overlap_sum": real(r.kraus_overlap_sum),
                "choi_rank": r.choi_rank,
                "kernel_residual": real(r.kernel_residual),
                "sqrt_kernel_residual": real(r.sqrt_kernel_residual),
            });
            let diagnostics = json!({ "choi_identity_residual": real(r.choi_identity_residual) });
            Ok(Outcome::ok(payload, diagnostics))
        }
        Demo::Orthogonality { j, k } => {
            let b: ComplexMatrix = req
                .b
                .clone()
                .unwrap_or_else(|| linalg::diag(&[c(2.0, 0.0), c(1.0, 0.0)]));
            let r = orthogonality_counterexample(&b, *j, *k, tol)?;
            let payload = json!({
                "value": c_to_json(r.value),
                "expected": real(r.expected),
                "H": mat_to_json(&r.h),
                "V": mat_to_json(&r.v),
            });
            let diagnostics = json!({
                "tr_bh_abs": real(r.tr_bh.norm()),
                "tr_bv_abs": real(r.tr_bv.norm()),
                "value_residual": real((r.value - c(r.expected, 0.0)).norm()),
            });
            Ok(Outcome::ok(payload, diagnostics))
        }
    }
}
