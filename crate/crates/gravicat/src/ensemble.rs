//! Weighted pure-state ensembles and exact trace distance between their
//! density matrices, computed inside the span of the member states.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::Hermitian;
use crate::wavefunction::WaveFunction;

/// Gram eigendirections below this are dropped: near lobe merger the
/// members become nearly parallel and the span loses rank; the cutoff
/// keeps the projected problem well conditioned (documented behavior,
/// not an error).
pub const GRAM_EIGENVALUE_CUTOFF: f64 = 1e-12;

/// A density-matrix decomposition: weighted list of pure states.
#[derive(Debug, Clone)]
pub struct PureEnsemble {
    members: Vec<(f64, WaveFunction)>,
}

impl PureEnsemble {
    /// Weights must be ≥ 0 and sum to 1 within 1e−12; all states must share
    /// one grid.
    pub fn new(members: Vec<(f64, WaveFunction)>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::Parameter("ensemble needs at least one member".into()));
        }
        let total: f64 = members.iter().map(|(w, _)| *w).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Parameter(format!(
                "ensemble weights sum to {total}, expected 1"
            )));
        }
        if members.iter().any(|(w, _)| *w < 0.0) {
            return Err(Error::Parameter("negative ensemble weight".into()));
        }
        let grid = *members[0].1.grid();
        for (_, s) in &members {
            grid.check_same(s.grid())?;
        }
        Ok(PureEnsemble { members })
    }

    pub fn pure(state: WaveFunction) -> Self {
        PureEnsemble {
            members: vec![(1.0, state)],
        }
    }

    /// Equal-weight pair.
    pub fn half_half(a: WaveFunction, b: WaveFunction) -> Result<Self> {
        Self::new(vec![(0.5, a), (0.5, b)])
    }

    pub fn members(&self) -> &[(f64, WaveFunction)] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Map every member state, keeping weights. Used to push a whole
    /// ensemble through an evolution.
    pub fn map_states(
        &self,
        mut f: impl FnMut(&WaveFunction) -> Result<WaveFunction>,
    ) -> Result<Self> {
        let mut members = Vec::with_capacity(self.members.len());
        for (w, s) in &self.members {
            members.push((*w, f(s)?));
        }
        PureEnsemble::new(members)
    }
}

/// Exact trace distance ½‖ρ(e1) − ρ(e2)‖₁ via the Gram matrix of the union
/// of member states: orthonormalize the span (dropping eigendirections
/// below [`GRAM_EIGENVALUE_CUTOFF`]), project both density matrices onto
/// it, and diagonalize the difference. Result is clamped to [0, 1].
///
/// Requires all states on one grid and total member count ≤ 64.
pub fn gram_trace_distance(e1: &PureEnsemble, e2: &PureEnsemble) -> Result<f64> {
    let grid = *e1.members[0].1.grid();
    for (_, s) in e1.members.iter().chain(&e2.members) {
        grid.check_same(s.grid())?;
    }
    let k = e1.len() + e2.len();
    if k > 64 {
        return Err(Error::Parameter(format!(
            "union of ensembles has {k} members, limit is 64"
        )));
    }

    let states: Vec<&WaveFunction> = e1
        .members
        .iter()
        .chain(&e2.members)
        .map(|(_, s)| s)
        .collect();
    let mut gram = Hermitian::zeros(k);
    for i in 0..k {
        for j in i..k {
            let ip = states[i].inner(states[j])?;
            gram.set(i, j, ip);
            gram.set(j, i, ip.conj());
        }
    }

    let (evals, evecs) = gram.eigh();
    // basis m: |b_m⟩ = λ_m^{−1/2} Σ_i U_im |v_i⟩; coefficient of member s in
    // that basis is C[m][s] = λ_m^{−1/2} (U† G)_{m s}
    let kept: Vec<usize> = (0..k)
        .filter(|&m| evals[m] > GRAM_EIGENVALUE_CUTOFF)
        .collect();
    let dim = kept.len();
    if dim == 0 {
        return Ok(0.0);
    }
    let mut coeff = vec![vec![Complex64::ZERO; k]; dim];
    for (row, &m) in kept.iter().enumerate() {
        let inv_sqrt = 1.0 / evals[m].sqrt();
        for s in 0..k {
            let mut acc = Complex64::ZERO;
            for i in 0..k {
                acc += evecs[m][i].conj() * gram.get(i, s);
            }
            coeff[row][s] = acc * inv_sqrt;
        }
    }

    let mut delta = Hermitian::zeros(dim);
    let mut accumulate = |weights: &[(f64, WaveFunction)], offset: usize, sign: f64| {
        for (s, (w, _)) in weights.iter().enumerate() {
            let col = offset + s;
            for m in 0..dim {
                for n in 0..dim {
                    let v = delta.get(m, n)
                        + coeff[m][col] * coeff[n][col].conj() * (sign * *w);
                    delta.set(m, n, v);
                }
            }
        }
    };
    accumulate(&e1.members, 0, 1.0);
    accumulate(&e2.members, e1.len(), -1.0);

    let (dvals, _) = delta.eigh();
    let td = 0.5 * dvals.iter().map(|v| v.abs()).sum::<f64>();
    Ok(td.clamp(0.0, 1.0))
}
