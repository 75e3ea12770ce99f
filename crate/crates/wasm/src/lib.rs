//! Browser bindings for the workbench. Three operations back the demo page:
//! a noise sweep of every headline quantity, a PPT cut scan at one noise
//! level, and a seeded Monte Carlo run of the communication game. Each
//! returns a JSON string; failures come back as `{"error": "..."}` so the
//! page can surface them without exception plumbing.

use wasm_bindgen::prelude::*;

mod api {
    use boundbell_core::bell::{bell_lhs, nbella_spec, sign_b, smolin_settings};
    use boundbell_core::commsim::{
        classical_success_bound, monte_carlo_success, quantum_exact_success, task_from_sign,
    };
    use boundbell_core::linalg::BipartitionMask;
    use boundbell_core::separability::{ppt_min_eigenvalue, ppt_scan};
    use boundbell_core::states::noisy_smolin;
    use serde_json::{json, Value};

    pub fn sweep_curves(steps: u32) -> Result<String, String> {
        if !(2..=2001).contains(&steps) {
            return Err(format!("steps must be in 2..=2001, got {steps}"));
        }
        let settings = smolin_settings();
        let spec = nbella_spec();
        let task = task_from_sign(&sign_b(), 16.0).map_err(|e| e.to_string())?;
        let single = BipartitionMask::new(4, &[0]).map_err(|e| e.to_string())?;
        let pair = BipartitionMask::new(4, &[0, 1]).map_err(|e| e.to_string())?;

        let mut p_axis = Vec::with_capacity(steps as usize);
        let mut lhs = Vec::with_capacity(steps as usize);
        let mut min_single = Vec::with_capacity(steps as usize);
        let mut min_pair = Vec::with_capacity(steps as usize);
        let mut success = Vec::with_capacity(steps as usize);
        for i in 0..steps {
            let p = f64::from(i) / f64::from(steps - 1);
            let rho = noisy_smolin(p).map_err(|e| e.to_string())?;
            p_axis.push(p);
            lhs.push(bell_lhs(&rho, &settings, &spec).map_err(|e| e.to_string())?);
            min_single.push(ppt_min_eigenvalue(&rho, &single).map_err(|e| e.to_string())?);
            min_pair.push(ppt_min_eigenvalue(&rho, &pair).map_err(|e| e.to_string())?);
            success.push(
                quantum_exact_success(&rho, &settings, &task).map_err(|e| e.to_string())?,
            );
        }
        Ok(json!({
            "p": p_axis,
            "bell_lhs": lhs,
            "ppt_min_single": min_single,
            "ppt_min_pair": min_pair,
            "quantum_success": success,
            "classical_bound": 2.0,
            "tsirelson": 2.0 * std::f64::consts::SQRT_2,
            "violation_threshold": std::f64::consts::FRAC_1_SQRT_2,
            "ppt_threshold": 1.0 / 3.0,
            "classical_success": classical_success_bound(&task),
            "quantum_ceiling": 0.5 * (1.0 + std::f64::consts::FRAC_1_SQRT_2),
        })
        .to_string())
    }

    pub fn ppt_cut_scan(p: f64) -> Result<String, String> {
        let rho = noisy_smolin(p).map_err(|e| e.to_string())?;
        let reports = ppt_scan(&rho).map_err(|e| e.to_string())?;
        let cuts: Vec<Value> = reports
            .iter()
            .map(|r| {
                json!({
                    "cut": r.mask.label(),
                    "min_eigenvalue": r.min_eigenvalue,
                    "is_ppt": r.is_ppt,
                })
            })
            .collect();
        let all_ppt = reports.iter().all(|r| r.is_ppt);
        Ok(json!({ "p": p, "cuts": cuts, "all_ppt": all_ppt }).to_string())
    }

    pub fn game_simulation(p: f64, trials: u32, seed: u32) -> Result<String, String> {
        if trials == 0 || trials > 5_000_000 {
            return Err(format!("trials must be in 1..=5000000, got {trials}"));
        }
        let rho = noisy_smolin(p).map_err(|e| e.to_string())?;
        let settings = smolin_settings();
        let task = task_from_sign(&sign_b(), 16.0).map_err(|e| e.to_string())?;
        let spec = nbella_spec();
        let exact = quantum_exact_success(&rho, &settings, &task).map_err(|e| e.to_string())?;
        let lhs = bell_lhs(&rho, &settings, &spec).map_err(|e| e.to_string())?;
        let est = monte_carlo_success(&rho, &settings, &task, u64::from(trials), u64::from(seed))
            .map_err(|e| e.to_string())?;
        Ok(json!({
            "p": p,
            "trials": est.trials,
            "seed": est.seed,
            "generator": est.generator,
            "successes": est.successes,
            "p_hat": est.p_hat,
            "std_error": est.std_error,
            "quantum_exact": exact,
            "classical_bound": classical_success_bound(&task),
            "bell_lhs": lhs,
        })
        .to_string())
    }

    pub fn wrap(result: Result<String, String>) -> String {
        result.unwrap_or_else(|msg| serde_json::json!({ "error": msg }).to_string())
    }
}

/// Noise sweep of the Bell LHS, the two PPT eigenvalue branches, and the
/// exact game success over `steps` evenly spaced p values in [0, 1].
#[wasm_bindgen]
pub fn sweep_curves(steps: u32) -> String {
    api::wrap(api::sweep_curves(steps))
}

/// Partial-transpose report for all seven bipartite cuts at one noise level.
#[wasm_bindgen]
pub fn ppt_cut_scan(p: f64) -> String {
    api::wrap(api::ppt_cut_scan(p))
}

/// Seeded Monte Carlo run of the communication game.
#[wasm_bindgen]
pub fn game_simulation(p: f64, trials: u32, seed: u32) -> String {
    api::wrap(api::game_simulation(p, trials, seed))
}

#[cfg(test)]
mod tests {
    use super::api;
    use serde_json::Value;

    #[test]
    fn sweep_payload_has_aligned_series() {
        let text = api::sweep_curves(41).unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        for key in ["p", "bell_lhs", "ppt_min_single", "ppt_min_pair", "quantum_success"] {
            assert_eq!(v[key].as_array().unwrap().len(), 41, "{key}");
        }
        let lhs = v["bell_lhs"].as_array().unwrap();
        let last = lhs.last().unwrap().as_f64().unwrap();
        assert!((last - 2.0 * std::f64::consts::SQRT_2).abs() < 1e-10);
        assert!(api::sweep_curves(1).is_err());
    }

    #[test]
    fn cut_scan_payload_lists_seven_cuts() {
        let text = api::ppt_cut_scan(1.0).unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["cuts"].as_array().unwrap().len(), 7);
        assert_eq!(v["all_ppt"], Value::Bool(false));

        let err = api::wrap(api::ppt_cut_scan(1.5));
        let v: Value = serde_json::from_str(&err).unwrap();
        assert!(v["error"].as_str().unwrap().contains("p = 1.5"));
    }

    #[test]
    fn simulation_payload_is_reproducible() {
        let a = api::game_simulation(1.0, 50_000, 7).unwrap();
        let b = api::game_simulation(1.0, 50_000, 7).unwrap();
        assert_eq!(a, b);
        let v: Value = serde_json::from_str(&a).unwrap();
        let p_hat = v["p_hat"].as_f64().unwrap();
        let se = v["std_error"].as_f64().unwrap();
        assert!((p_hat - 0.8535).abs() < 4.0 * se);
    }
}
