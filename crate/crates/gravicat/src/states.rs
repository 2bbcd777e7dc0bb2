//! Named state constructors and measurements: displaced soliton pairs,
//! even/odd cat superpositions, the symmetric two-lobe projector, and the
//! canonical ensemble decompositions used by the mixing witness.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ensemble::PureEnsemble;
use crate::error::{Error, Result};
use crate::propagate::SolitonProfile;
use crate::wavefunction::WaveFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CatSign {
    Plus,
    Minus,
}

impl CatSign {
    pub fn factor(&self) -> f64 {
        match self {
            CatSign::Plus => 1.0,
            CatSign::Minus => -1.0,
        }
    }
}

/// Specification of a two-lobe superposition: lobe separation, relative
/// sign, and (in 3D) the separation axis.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CatSpec {
    pub ell: f64,
    pub sign: CatSign,
    pub axis: usize,
}

impl CatSpec {
    pub fn new(ell: f64, sign: CatSign) -> Self {
        CatSpec { ell, sign, axis: 0 }
    }

    pub fn with_axis(mut self, axis: usize) -> Self {
        self.axis = axis;
        self
    }
}

/// The soliton displaced to ∓ℓ/2 along the cat axis. The right lobe is the
/// exact parity image of the left one, so the constructed pair is
/// mirror-symmetric to the bit.
pub fn left_right_lobes(
    soliton: &SolitonProfile,
    spec: &CatSpec,
) -> Result<(WaveFunction, WaveFunction)> {
    check_cat_geometry(soliton, spec)?;
    let mut base = soliton.state.clone();
    let centroid = base.expectation_x()[spec.axis];
    if centroid.abs() > base.grid().spacing() * 0.1 {
        base = base.translated(-centroid, spec.axis)?;
    }
    let left = base.translated(-spec.ell / 2.0, spec.axis)?;
    let right = left.reflected();
    Ok((left, right))
}

fn check_cat_geometry(soliton: &SolitonProfile, spec: &CatSpec) -> Result<()> {
    let grid = soliton.state.grid();
    if spec.axis >= grid.dim() {
        return Err(Error::Parameter(format!(
            "cat axis {} out of range for {}D",
            spec.axis,
            grid.dim()
        )));
    }
    if !(spec.ell.is_finite() && spec.ell > 0.0) {
        return Err(Error::Parameter(format!("cat separation {}", spec.ell)));
    }
    let d = soliton.fwhm;
    if d.is_finite() {
        if spec.ell < 2.0 * d {
            return Err(Error::Construction(format!(
                "separation {} is below twice the soliton diameter {d:.3}",
                spec.ell
            )));
        }
        if spec.ell < 4.0 * d {
            log::warn!(
                "cat separation {} is under 4× the soliton diameter {d:.3}; lobes overlap noticeably",
                spec.ell
            );
        }
        if grid.box_length() < spec.ell + 4.0 * d {
            return Err(Error::Construction(format!(
                "box {} too small for separation {} plus 4×{d:.3} of margin",
                grid.box_length(),
                spec.ell
            )));
        }
    }
    Ok(())
}

/// Normalized (φ(x−ℓ/2) ± φ(x+ℓ/2)) / √(2 ± 2Re⟨L|R⟩), the cross term
/// included exactly.
pub fn build_cat(soliton: &SolitonProfile, spec: &CatSpec) -> Result<WaveFunction> {
    let (left, right) = left_right_lobes(soliton, spec)?;
    let s = spec.sign.factor();
    let amps: Vec<Complex64> = left
        .amplitudes()
        .iter()
        .zip(right.amplitudes())
        .map(|(l, r)| l + s * r)
        .collect();
    WaveFunction::from_amplitudes(*left.grid(), amps)
}

/// Norm correction 1/√(2 ± 2Re⟨L|R⟩) the cat constructor divides by;
/// approaches 1/√2 for well-separated lobes.
pub fn cat_norm_correction(soliton: &SolitonProfile, spec: &CatSpec) -> Result<f64> {
    let (left, right) = left_right_lobes(soliton, spec)?;
    let eps = left.inner(&right)?.re;
    Ok(1.0 / (2.0 + 2.0 * spec.sign.factor() * eps).sqrt())
}

/// Rank-2 projector onto span{○_L, ○_R}, stored in the symmetric (Löwdin)
/// orthonormal basis.
#[derive(Debug, Clone)]
pub struct ProjectorLR {
    basis: [WaveFunction; 2],
}

impl ProjectorLR {
    /// Symmetric orthogonalization of {left, right}: e = S^(−1/2)·v. For
    /// already-orthogonal inputs this reproduces them identically.
    pub fn from_states(left: &WaveFunction, right: &WaveFunction) -> Result<Self> {
        left.grid().check_same(right.grid())?;
        let eps = left.inner(right)?;
        let mag = eps.norm();
        if mag >= 1.0 - 1e-12 {
            return Err(Error::Construction(format!(
                "lobes are parallel (|⟨L|R⟩| = {mag:.6}); no two-dimensional span"
            )));
        }
        // S = [[1, ε],[ε*, 1]]; S^(−1/2) has eigenvalues (1±|ε|)^(−1/2) on
        // (1, ±phase)/√2 with phase = ε/|ε|
        let (a, b) = if mag < 1e-15 {
            (Complex64::ONE, Complex64::ZERO)
        } else {
            let phase = eps / mag;
            let p = 0.5 * ((1.0 + mag).powf(-0.5) + (1.0 - mag).powf(-0.5));
            let q = 0.5 * ((1.0 + mag).powf(-0.5) - (1.0 - mag).powf(-0.5));
            (Complex64::new(p, 0.0), phase * q)
        };
        let grid = *left.grid();
        let combine = |c1: Complex64, v1: &WaveFunction, c2: Complex64, v2: &WaveFunction| {
            let amps: Vec<Complex64> = v1
                .amplitudes()
                .iter()
                .zip(v2.amplitudes())
                .map(|(x, y)| c1 * x + c2 * y)
                .collect();
            WaveFunction::from_raw_parts(grid, amps)
        };
        // e_L = a·L + b·R, e_R = b*·L + a·R (S^{−1/2} is Hermitian)
        let e_l = combine(a, left, b, right)?;
        let e_r = combine(b.conj(), left, a, right)?;
        let projector = ProjectorLR { basis: [e_l, e_r] };
        projector.validate()?;
        Ok(projector)
    }

    pub fn from_soliton(soliton: &SolitonProfile, spec: &CatSpec) -> Result<Self> {
        let (left, right) = left_right_lobes(soliton, spec)?;
        Self::from_states(&left, &right)
    }

    fn validate(&self) -> Result<()> {
        let [e_l, e_r] = &self.basis;
        let nl = e_l.inner(e_l)?.re;
        let nr = e_r.inner(e_r)?.re;
        let cross = e_l.inner(e_r)?.norm();
        if (nl - 1.0).abs() > 1e-10 || (nr - 1.0).abs() > 1e-10 || cross > 1e-10 {
            return Err(Error::Construction(format!(
                "orthonormalization defect: norms ({nl:.12}, {nr:.12}), cross {cross:.3e}"
            )));
        }
        Ok(())
    }

    pub fn basis(&self) -> &[WaveFunction; 2] {
        &self.basis
    }

    /// ⟨ψ|P|ψ⟩ = |⟨e_L|ψ⟩|² + |⟨e_R|ψ⟩|².
    pub fn measure(&self, psi: &WaveFunction) -> Result<f64> {
        let a = self.basis[0].inner(psi)?.norm_sqr();
        let b = self.basis[1].inner(psi)?.norm_sqr();
        Ok(a + b)
    }

    /// ψ − Pψ.
    pub fn complement(&self, psi: &WaveFunction) -> Result<Vec<Complex64>> {
        let cl = self.basis[0].inner(psi)?;
        let cr = self.basis[1].inner(psi)?;
        Ok(psi
            .amplitudes()
            .iter()
            .zip(self.basis[0].amplitudes())
            .zip(self.basis[1].amplitudes())
            .map(|((p, el), er)| p - cl * el - cr * er)
            .collect())
    }
}

/// The two decompositions of the same reduced state: E_LR = {(½, ○_L),
/// (½, ○_R)} and E_cat = {(½, Ψ₊), (½, Ψ₋)}. They share one density matrix
/// exactly when ⟨L|R⟩ = 0.
pub fn canonical_ensembles(
    soliton: &SolitonProfile,
    spec: &CatSpec,
) -> Result<(PureEnsemble, PureEnsemble)> {
    let (left, right) = left_right_lobes(soliton, spec)?;
    let plus = build_cat(
        soliton,
        &CatSpec {
            sign: CatSign::Plus,
            ..*spec
        },
    )?;
    let minus = build_cat(
        soliton,
        &CatSpec {
            sign: CatSign::Minus,
            ..*spec
        },
    )?;
    let e_lr = PureEnsemble::half_half(left, right)?;
    let e_cat = PureEnsemble::half_half(plus, minus)?;
    Ok((e_lr, e_cat))
}
