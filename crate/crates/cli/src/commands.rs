//! Implementations behind the subcommands: build the requested objects from
//! the core library, compute, and render a report.

use crate::report::{sig9, ReportDocument, SweepTable};
use boundbell_core::bell::{
    bell_lhs, bell_operator, chsh_settings, chsh_spec, correlation, index_to_tuple, is_violated,
    lhv_bound, nbella_spec, optimize_settings, sign_b, smolin_settings, wwzb_coefficients,
    BellSpec, SettingFamily,
};
use boundbell_core::commsim::{
    best_classical_success, classical_success_bound, monte_carlo_success_with_workers,
    quantum_exact_success, task_from_sign,
};
use boundbell_core::linalg::BipartitionMask;
use boundbell_core::separability::{entanglement_threshold, ppt_scan};
use boundbell_core::states::{ghz, noisy_smolin, smolin, werner, DensityMatrix};
use boundbell_core::Error as CoreError;
use serde_json::{json, Value};

/// Failures split by exit code: 2 for bad requests, 3 for the numerics
/// failing an internal consistency check.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Numerical(m) => m,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::NumericalInconsistency(_)
            | CoreError::NoConvergence(_)
            | CoreError::ImaginaryResidue(_)
            | CoreError::NotHermitian { .. } => CliError::Numerical(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

fn require_p(p: Option<f64>, context: &str) -> CliResult<f64> {
    p.ok_or_else(|| CliError::Usage(format!("--p is required for {context}")))
}

fn build_state(name: &str, p: Option<f64>, ghz_qubits: usize) -> CliResult<DensityMatrix> {
    match name {
        "smolin" => Ok(smolin()),
        "noisy-smolin" => Ok(noisy_smolin(require_p(p, "noisy-smolin")?)?),
        "werner" => Ok(werner(require_p(p, "werner")?)?),
        "ghz" => Ok(DensityMatrix::from_pure(&ghz(ghz_qubits)?)?),
        other => Err(CliError::Usage(format!(
            "unknown state '{other}' (expected smolin | noisy-smolin | werner | ghz)"
        ))),
    }
}

fn parse_cut(label: &str, num_qubits: usize) -> CliResult<BipartitionMask> {
    let mut qubits = Vec::new();
    for ch in label.chars() {
        let upper = ch.to_ascii_uppercase();
        if !('A'..='F').contains(&upper) {
            return Err(CliError::Usage(format!("bad cut letter '{ch}' in '{label}'")));
        }
        let q = (upper as u8 - b'A') as usize;
        if q >= num_qubits {
            return Err(CliError::Usage(format!(
                "cut '{label}' references qubit {upper} beyond the state's {num_qubits} qubits"
            )));
        }
        qubits.push(q);
    }
    Ok(BipartitionMask::new(num_qubits, &qubits)?)
}

fn settings_json(settings: &SettingFamily) -> Value {
    Value::Array(
        settings
            .parties()
            .iter()
            .map(|(a, b)| {
                let dir = |m: &boundbell_core::bell::MeasurementSetting| {
                    Value::Array(m.direction().iter().map(|&x| json!(sig9(x))).collect())
                };
                Value::Array(vec![dir(a), dir(b)])
            })
            .collect(),
    )
}

fn render(doc: &ReportDocument, format: Format) -> String {
    match format {
        Format::Json => doc.to_json(),
        Format::Csv => doc.to_csv(),
    }
}

pub fn cmd_state(
    name: &str,
    p: Option<f64>,
    n: usize,
    include_matrix: bool,
    format: Format,
) -> CliResult<String> {
    let state = build_state(name, p, n)?;
    let mut doc = ReportDocument::new("state");
    doc.param("name", name);
    if let Some(p) = p {
        doc.param("p", p);
    }
    if name == "ghz" {
        doc.param("n", n as u64);
    }
    doc.result("num_qubits", state.num_qubits() as u64);
    let eigs: Vec<Value> = state
        .eigenvalues()?
        .into_iter()
        .map(|e| json!(sig9(e)))
        .collect();
    doc.result("eigenvalues", Value::Array(eigs));
    doc.result_num("trace", state.matrix().trace().re);
    doc.result_num("purity", state.purity());
    if include_matrix {
        let dim = state.dim();
        let rows: Vec<Value> = (0..dim)
            .map(|r| {
                Value::Array(
                    (0..dim)
                        .map(|c| {
                            let v = state.matrix().get(r, c);
                            json!([sig9(v.re), sig9(v.im)])
                        })
                        .collect(),
                )
            })
            .collect();
        doc.result("matrix", Value::Array(rows));
    }
    Ok(render(&doc, format))
}

fn inequality_for(name: &str, num_qubits: usize) -> CliResult<BellSpec> {
    match (name, num_qubits) {
        ("auto", 4) | ("nbella", 4) => Ok(nbella_spec()),
        ("wwzb-signb", 4) => Ok(wwzb_coefficients(&sign_b())),
        ("auto", 2) | ("chsh", 2) => Ok(chsh_spec()),
        ("nbella" | "wwzb-signb", q) => Err(CliError::Usage(format!(
            "inequality '{name}' needs a 4-qubit state, got {q} qubits"
        ))),
        ("chsh", q) => Err(CliError::Usage(format!(
            "inequality 'chsh' needs a 2-qubit state, got {q} qubits"
        ))),
        ("auto", q) => Err(CliError::Usage(format!(
            "no default inequality for {q}-qubit states"
        ))),
        (other, _) => Err(CliError::Usage(format!(
            "unknown inequality '{other}' (expected nbella | wwzb-signb | chsh)"
        ))),
    }
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_bell(
    state_name: &str,
    p: Option<f64>,
    inequality: &str,
    optimize: bool,
    restarts: usize,
    seed: Option<u64>,
    format: Format,
) -> CliResult<String> {
    let state = build_state(state_name, p, 4)?;
    let spec = inequality_for(inequality, state.num_qubits())?;

    let mut doc = ReportDocument::new("bell");
    doc.param("state", state_name);
    if let Some(p) = p {
        doc.param("p", p);
    }
    doc.param("inequality", inequality);

    let settings = if optimize {
        let seed = seed.ok_or_else(|| {
            CliError::Usage("--optimize needs an explicit --seed for reproducibility".into())
        })?;
        doc.param("restarts", restarts as u64);
        doc.seed = Some(seed);
        let (family, value) = optimize_settings(&state, &spec, restarts, seed)?;
        doc.result_num("optimize_value", value);
        family
    } else if state.num_qubits() == 4 {
        smolin_settings()
    } else {
        chsh_settings()
    };
    doc.param("settings", if optimize { "optimized" } else { "builtin" });

    let n = spec.num_parties();
    for (idx, &g) in spec.coefficients().iter().enumerate() {
        if g != 0.0 {
            let tuple = index_to_tuple(n, idx);
            let label: Vec<String> = tuple.iter().map(u8::to_string).collect();
            doc.result_num(
                &format!("E({})", label.join(",")),
                correlation(&state, &settings, &tuple)?,
            );
        }
    }
    let lhs = bell_lhs(&state, &settings, &spec)?;
    let bound = lhv_bound(&spec)?;
    doc.result_num("lhs", lhs);
    doc.result_num("classical_bound", spec.classical_bound());
    doc.result_num("lhv_bound", bound);
    doc.result("violated", is_violated(lhs, bound));
    let eigs = bell_operator(&settings, &spec)?.hermitian_eigenvalues()?;
    doc.result_num("operator_min", *eigs.first().expect("nonempty"));
    doc.result_num("operator_max", *eigs.last().expect("nonempty"));
    doc.result("settings_directions", settings_json(&settings));
    Ok(render(&doc, format))
}

pub fn cmd_ppt(
    state_name: &str,
    p: Option<f64>,
    threshold: bool,
    cut: Option<&str>,
    lo: f64,
    hi: f64,
    format: Format,
) -> CliResult<String> {
    let mut doc = ReportDocument::new("ppt");
    doc.param("state", state_name);

    if threshold {
        let cut = cut.ok_or_else(|| CliError::Usage("--threshold needs --cut".into()))?;
        doc.param("cut", cut);
        doc.param("lo", lo);
        doc.param("hi", hi);
        let value = match state_name {
            "noisy-smolin" => {
                let mask = parse_cut(cut, 4)?;
                entanglement_threshold(noisy_smolin, &mask, lo, hi)?
            }
            "werner" => {
                let mask = parse_cut(cut, 2)?;
                entanglement_threshold(werner, &mask, lo, hi)?
            }
            other => {
                return Err(CliError::Usage(format!(
                    "threshold location works on the parameterized families \
                     noisy-smolin | werner, not '{other}'"
                )))
            }
        };
        doc.result_num("threshold", value);
        return Ok(render(&doc, format));
    }

    let state = build_state(state_name, p, 4)?;
    if let Some(p) = p {
        doc.param("p", p);
    }
    if state.num_qubits() != 4 {
        return Err(CliError::Usage(format!(
            "the cut scan covers 4-qubit states; '{state_name}' has {}",
            state.num_qubits()
        )));
    }
    let reports = ppt_scan(&state)?;
    let mut all_ppt = true;
    for r in &reports {
        let label = r.mask.label();
        doc.result_num(&format!("cut_{label}_min_eigenvalue"), r.min_eigenvalue);
        doc.result(&format!("cut_{label}_is_ppt"), r.is_ppt);
        all_ppt &= r.is_ppt;
    }
    doc.result("all_ppt", all_ppt);
    Ok(render(&doc, format))
}

pub fn cmd_commsim(
    p: f64,
    exact_only: bool,
    trials: Option<u64>,
    seed: Option<u64>,
    workers: usize,
    format: Format,
) -> CliResult<String> {
    let state = noisy_smolin(p)?;
    let settings = smolin_settings();
    let task = task_from_sign(&sign_b(), 16.0)?;

    let mut doc = ReportDocument::new("commsim");
    doc.param("p", p);
    doc.result_num("classical_bound", classical_success_bound(&task));
    let (best, _) = best_classical_success(&task)?;
    doc.result_num("best_classical", best);
    doc.result_num(
        "quantum_exact",
        quantum_exact_success(&state, &settings, &task)?,
    );

    if exact_only {
        return Ok(render(&doc, format));
    }
    let trials =
        trials.ok_or_else(|| CliError::Usage("--trials is required unless --exact-only".into()))?;
    let seed = seed.ok_or_else(|| {
        CliError::Usage("--seed is required for simulation; there is no silent entropy".into())
    })?;
    doc.param("trials", trials);
    doc.param("workers", workers as u64);
    doc.seed = Some(seed);
    let est = monte_carlo_success_with_workers(&state, &settings, &task, trials, seed, workers)?;
    doc.result("successes", est.successes);
    doc.result_num("p_hat", est.p_hat);
    doc.result_num("std_error", est.std_error);
    doc.result("generator", est.generator);
    Ok(render(&doc, format))
}

pub fn cmd_sweep(
    quantity: &str,
    p_lo: f64,
    p_hi: f64,
    step: f64,
    format: Format,
) -> CliResult<String> {
    if !(0.0..=1.0).contains(&p_lo) || !(0.0..=1.0).contains(&p_hi) || p_lo >= p_hi {
        return Err(CliError::Usage(format!(
            "need 0 <= p-lo < p-hi <= 1, got [{p_lo}, {p_hi}]"
        )));
    }
    if step <= 0.0 {
        return Err(CliError::Usage(format!("step must be positive, got {step}")));
    }
    let (want_bell, want_ppt, want_game) = match quantity {
        "all" => (true, true, true),
        "bell" => (true, false, false),
        "ppt" => (false, true, false),
        "commsim" => (false, false, true),
        other => {
            return Err(CliError::Usage(format!(
                "unknown quantity '{other}' (expected all | bell | ppt | commsim)"
            )))
        }
    };

    let mut columns = vec!["p".to_string()];
    if want_bell {
        columns.push("bell_lhs".to_string());
    }
    if want_ppt {
        columns.push("ppt_min_single".to_string());
        columns.push("ppt_min_pair".to_string());
    }
    if want_game {
        columns.push("quantum_success".to_string());
    }

    let settings = smolin_settings();
    let spec = nbella_spec();
    let task = task_from_sign(&sign_b(), 16.0)?;
    let single = BipartitionMask::new(4, &[0])?;
    let pair = BipartitionMask::new(4, &[0, 1])?;

    let mut rows = Vec::new();
    let mut i = 0u32;
    loop {
        let p = p_lo + f64::from(i) * step;
        if p > p_hi + 1e-12 {
            break;
        }
        let p = p.min(1.0);
        let rho = noisy_smolin(p)?;
        let mut row = vec![p];
        if want_bell {
            row.push(bell_lhs(&rho, &settings, &spec)?);
        }
        if want_ppt {
            row.push(boundbell_core::separability::ppt_min_eigenvalue(
                &rho, &single,
            )?);
            row.push(boundbell_core::separability::ppt_min_eigenvalue(
                &rho, &pair,
            )?);
        }
        if want_game {
            row.push(quantum_exact_success(&rho, &settings, &task)?);
        }
        rows.push(row);
        i += 1;
    }

    let table = SweepTable { columns, rows };
    Ok(match format {
        Format::Json => table.to_json_lines(),
        Format::Csv => table.to_csv(),
    })
}
