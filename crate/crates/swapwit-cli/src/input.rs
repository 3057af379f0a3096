use num_complex::Complex64;
use swapwit::photonic::{prepare_state, NoiseModel, PrepPhases};
use swapwit::{Noise, PureState};

use crate::args::{NoisePreset, StateInput};
use crate::error::{CliError, CliResult};

fn numbers(text: &str, expected: usize, what: &str) -> CliResult<Vec<f64>> {
    let vals = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Input(format!("{what}: cannot parse `{}`", s.trim())))
        })
        .collect::<CliResult<Vec<f64>>>()?;
    if vals.len() != expected {
        return Err(CliError::Input(format!(
            "{what}: expected {expected} values, got {}",
            vals.len()
        )));
    }
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(CliError::Input(format!("{what}: values must be finite")));
    }
    Ok(vals)
}

/// Four comma-separated amplitudes in |00>, |10>, |01>, |11> order, normalized.
pub fn parse_amplitudes(text: &str) -> CliResult<PureState> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(CliError::Input(format!(
            "state: expected 4 amplitudes, got {}",
            parts.len()
        )));
    }
    let mut c = [Complex64::new(0.0, 0.0); 4];
    for (slot, p) in c.iter_mut().zip(&parts) {
        *slot = p
            .parse::<Complex64>()
            .map_err(|_| CliError::Input(format!("state: cannot parse amplitude `{p}`")))?;
        if !slot.re.is_finite() || !slot.im.is_finite() {
            return Err(CliError::Input(format!("state: amplitude `{p}` is not finite")));
        }
    }
    Ok(PureState::normalized(c)?)
}

pub fn parse_phases(text: &str) -> CliResult<PrepPhases<f64>> {
    let v = numbers(text, 12, "phases")?;
    let mut a = [0.0; 12];
    a.copy_from_slice(&v);
    Ok(PrepPhases::from_array(a))
}

pub fn parse_noise(text: Option<&str>, preset: Option<NoisePreset>) -> CliResult<Option<Noise>> {
    match (text, preset) {
        (Some(t), _) => {
            let v = numbers(t, 3, "noise")?;
            Ok(Some(NoiseModel::new(v[0], v[1], v[2])?))
        }
        (None, Some(NoisePreset::Hardware750)) => Ok(Some(NoiseModel::hardware750())),
        (None, None) => Ok(None),
    }
}

/// The target state and, when given as phases, the setting that prepares it.
pub struct ResolvedState {
    pub state: PureState,
    pub phases: Option<PrepPhases<f64>>,
}

pub fn resolve_state(input: &StateInput, default: Option<PureState>) -> CliResult<ResolvedState> {
    if let Some(p) = &input.phases {
        let phases = parse_phases(p)?;
        return Ok(ResolvedState {
            state: prepare_state(&phases),
            phases: Some(phases),
        });
    }
    let state = match (&input.state, default) {
        (Some(s), _) => parse_amplitudes(s)?,
        (None, Some(d)) => d,
        (None, None) => return Err(CliError::Input("give --state or --phases".into())),
    };
    Ok(ResolvedState {
        state,
        phases: None,
    })
}
