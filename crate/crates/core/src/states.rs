//! Generalized coherent states: wavefunctions, densities, moments and
//! uncertainty relations.
//!
//! A state is fixed by a [`SeedCoefficients`] pair, the dimensionless field
//! and the eigenvalue `ζ` of the annihilation-type integral of motion.
//! Everything that depends only on `τ` is evaluated once in [`StateAt`], so
//! sampling a wavefunction on a grid costs one `exp` per point.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use crate::dynamics::{coefficient_functions, phase_integral, FieldParams, PhysicalSetup, SeedCoefficients};
use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::quadrature::{self, Tolerance};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Slack allowed below the Heisenberg bound before it is reported as violated.
pub const HEISENBERG_TOL: f64 = 1e-12;

/// Sign of the cross term in `σ_q(τ)² = σ_q² ± √(4σ_q²σ_p² − 1) τ + σ_p² τ²`.
///
/// `Spreading` corresponds to `Im(f0 g0*) ≤ 0`, the branch for which the
/// coordinate spread never drops below its initial value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Spreading,
    Focusing,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Spreading => 1.0,
            Branch::Focusing => -1.0,
        }
    }
}

/// Closed-form first and second moments at one instant (dimensionless).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSet {
    pub tau: f64,
    pub mean_q: f64,
    pub mean_p: f64,
    pub sigma_q: f64,
    pub sigma_p: f64,
    pub sigma_qp: f64,
}

impl MomentSet {
    /// `σ_q² σ_p² − σ_qp² − 1/4`, with the squares split into exact
    /// high and low parts so the cancellation costs no extra rounding.
    pub fn rs_residual(&self) -> f64 {
        let a = self.sigma_q * self.sigma_p;
        let a_lo = self.sigma_q.mul_add(self.sigma_p, -a);
        let a2 = a * a;
        let a2_lo = a.mul_add(a, -a2) + 2.0 * a * a_lo;
        let s = self.sigma_qp;
        let s2 = s * s;
        let s2_lo = s.mul_add(s, -s2);
        ((a2 - s2) - 0.25) + (a2_lo - s2_lo)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyReport {
    pub heisenberg_product: f64,
    pub rs_residual: f64,
}

impl UncertaintyReport {
    pub fn heisenberg_holds(&self) -> bool {
        self.heisenberg_product >= 0.5 - HEISENBERG_TOL
    }
}

/// `ζ = (f0 q̄0 + i g0 p̄0)/√2`.
pub fn zeta_from_initial(seed: &SeedCoefficients, mean_q0: f64, mean_p0: f64) -> Complex64 {
    (seed.f0() * mean_q0 + I * seed.g0() * mean_p0) / SQRT_2
}

/// Inverse of [`zeta_from_initial`]: `q̄0 = √2 Re(g0* ζ)`, `p̄0 = √2 Im(f0* ζ)`.
pub fn initial_means(seed: &SeedCoefficients, zeta: Complex64) -> (f64, f64) {
    (
        SQRT_2 * (seed.g0().conj() * zeta).re,
        SQRT_2 * (seed.f0().conj() * zeta).im,
    )
}

/// `σ_q(τ)` from the initial spreads on the chosen branch.
pub fn sigma_q_closed_form(sigma_q0: f64, sigma_p0: f64, branch: Branch, tau: f64) -> Result<f64> {
    ensure_positive("sigma_q0", sigma_q0)?;
    ensure_positive("sigma_p0", sigma_p0)?;
    let product = sigma_q0 * sigma_p0;
    if product < 0.5 - HEISENBERG_TOL {
        return Err(Error::HeisenbergViolation { product, bound: 0.5 });
    }
    let cross = (4.0 * product * product - 1.0).max(0.0).sqrt();
    Ok((sigma_q0 * sigma_q0 + branch.sign() * cross * tau + (sigma_p0 * tau).powi(2)).sqrt())
}

/// Seed with real positive `g0` reproducing the initial spreads on `branch`.
pub fn seed_from_spreads(sigma_q0: f64, sigma_p0: f64, branch: Branch) -> Result<SeedCoefficients> {
    ensure_positive("sigma_q0", sigma_q0)?;
    ensure_positive("sigma_p0", sigma_p0)?;
    let product = sigma_q0 * sigma_p0;
    if product < 0.5 - HEISENBERG_TOL {
        return Err(Error::HeisenbergViolation { product, bound: 0.5 });
    }
    let im = -branch.sign() * (4.0 * product * product - 1.0).max(0.0).sqrt();
    let g0 = Complex64::new(SQRT_2 * sigma_q0, 0.0);
    SeedCoefficients::new(Complex64::new(1.0, im) / g0, g0)
}

/// Minimal-uncertainty seed `g0 = √2 σ_q0`, `f0 = 1/g0`.
pub fn cs_specialize(sigma_q0: f64) -> Result<SeedCoefficients> {
    ensure_positive("sigma_q0", sigma_q0)?;
    let g0 = SQRT_2 * sigma_q0;
    SeedCoefficients::new(Complex64::new(1.0 / g0, 0.0), Complex64::new(g0, 0.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GcsState {
    seed: SeedCoefficients,
    field: FieldParams,
    zeta: Complex64,
}

impl GcsState {
    pub fn new(seed: SeedCoefficients, field: FieldParams, zeta: Complex64) -> Result<Self> {
        ensure_finite("big_xi", field.big_xi)?;
        ensure_finite("alpha", field.alpha)?;
        ensure_finite("zeta.re", zeta.re)?;
        ensure_finite("zeta.im", zeta.im)?;
        Ok(Self { seed, field, zeta })
    }

    pub fn from_initial_means(seed: SeedCoefficients, field: FieldParams, mean_q0: f64, mean_p0: f64) -> Result<Self> {
        Self::new(seed, field, zeta_from_initial(&seed, mean_q0, mean_p0))
    }

    /// State in the dimensionless field of `setup`.
    pub fn in_setup(seed: SeedCoefficients, zeta: Complex64, setup: &PhysicalSetup) -> Result<Self> {
        Self::new(seed, FieldParams::new(setup.big_xi(), setup.alpha()), zeta)
    }

    pub fn seed(&self) -> &SeedCoefficients {
        &self.seed
    }

    pub fn field(&self) -> FieldParams {
        self.field
    }

    pub fn zeta(&self) -> Complex64 {
        self.zeta
    }

    pub fn initial_means(&self) -> (f64, f64) {
        initial_means(&self.seed, self.zeta)
    }

    /// Evaluates all `τ`-dependent quantities.
    pub fn at(&self, tau: f64) -> Result<StateAt> {
        ensure_finite("tau", tau)?;
        let k = coefficient_functions(&self.seed, self.field, tau);
        let g0 = self.seed.g0();
        if k.g.norm() < 1e-300 || g0.norm() < 1e-300 {
            return Err(Error::DegenerateSeed {
                tau,
                modulus: k.g.norm(),
            });
        }
        // g(τ) runs along a straight line that misses the origin, so the
        // principal log of g/g0 is the continuous change of log g.
        let ln_g = g0.ln() + (k.g / g0).ln();
        let (q0, p0) = self.initial_means();
        let xi = self.field.big_xi;
        Ok(StateAt {
            tau,
            f0: k.f,
            g: k.g,
            phi: k.phi,
            zeta: self.zeta,
            ln_g,
            phase_integral: phase_integral(&self.seed, self.field, tau)?,
            mean_q: q0 + p0 * tau + 0.5 * xi * tau * tau,
            mean_p: p0 + xi * tau * self.field.sin2(),
        })
    }

    pub fn evaluate(&self, q: f64, tau: f64) -> Result<Complex64> {
        Ok(self.at(tau)?.amplitude(q))
    }

    pub fn density(&self, q: f64, tau: f64) -> Result<f64> {
        Ok(self.at(tau)?.density(q))
    }

    pub fn moments(&self, tau: f64) -> MomentSet {
        let (q0, p0) = self.initial_means();
        let xi = self.field.big_xi;
        let f0 = self.seed.f0();
        let g = self.seed.g(tau);
        let cov = (f0.conj() * g - 1.0) / (2.0 * I);
        MomentSet {
            tau,
            mean_q: q0 + p0 * tau + 0.5 * xi * tau * tau,
            mean_p: p0 + xi * tau * self.field.sin2(),
            sigma_q: g.norm() / SQRT_2,
            sigma_p: f0.norm() / SQRT_2,
            sigma_qp: cov.re,
        }
    }

    pub fn check_uncertainty(&self, tau: f64) -> UncertaintyReport {
        let m = self.moments(tau);
        UncertaintyReport {
            heisenberg_product: m.sigma_q * m.sigma_p,
            rs_residual: m.rs_residual(),
        }
    }

    /// Initial classical data `(z0, p0)` in the units of `setup`.
    pub fn classical_correspondence(&self, setup: &PhysicalSetup) -> (f64, f64) {
        let l = setup.length_scale();
        let sigma_z = l * self.seed.g0().norm() / SQRT_2;
        let sigma_pz = setup.hbar() * self.seed.f0().norm() / SQRT_2 / l;
        let z0 = 2.0 * sigma_z * (Complex64::from_polar(1.0, -self.seed.g0().arg()) * self.zeta).re;
        let p0 = 2.0 * sigma_pz * (Complex64::from_polar(1.0, -self.seed.f0().arg()) * self.zeta).im;
        (z0, p0)
    }
}

/// A [`GcsState`] frozen at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateAt {
    tau: f64,
    f0: Complex64,
    g: Complex64,
    phi: Complex64,
    zeta: Complex64,
    ln_g: Complex64,
    phase_integral: f64,
    mean_q: f64,
    mean_p: f64,
}

impl StateAt {
    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn mean_q(&self) -> f64 {
        self.mean_q
    }

    pub fn mean_p(&self) -> f64 {
        self.mean_p
    }

    pub fn sigma_q(&self) -> f64 {
        self.g.norm() / SQRT_2
    }

    /// `∫₀^τ Re Q/2`.
    pub fn phase_integral(&self) -> f64 {
        self.phase_integral
    }

    /// Copy with the `∫ Re Q/2` phase removed. Only useful to demonstrate
    /// that the Schrödinger residual detects a wrong phase.
    pub fn without_phase_integral(mut self) -> Self {
        self.phase_integral = 0.0;
        self
    }

    /// `√g` on the branch continuous in `τ` from the principal value at 0.
    pub fn sqrt_g(&self) -> Complex64 {
        (0.5 * self.ln_g).exp()
    }

    fn log_prefactor(&self) -> Complex64 {
        -0.25 * PI.ln() - 0.5 * self.ln_g
    }

    /// Wavefunction as the `ζ`-displaced vacuum of the integral of motion.
    pub fn amplitude(&self, q: f64) -> Complex64 {
        let (g, phi, zeta, f0) = (self.g, self.phi, self.zeta, self.f0);
        let phi_over_g = phi / g;
        let vacuum = self.log_prefactor()
            - f0 / g * (q * q / 2.0)
            - SQRT_2 * phi_over_g * q
            - g.norm_sqr() * phi_over_g.re.powi(2)
            - I * self.phase_integral;
        let displacement = SQRT_2 * (q + SQRT_2 * (phi * g.conj()).re) * zeta / g
            - g.conj() / g * zeta * zeta / 2.0
            - zeta.norm_sqr() / 2.0;
        (vacuum + displacement).exp()
    }

    /// Real phase `ϱ(τ)` of the centred form.
    pub fn varrho(&self) -> f64 {
        let (g, phi, f0) = (self.g, self.phi, self.f0);
        ((f0 * phi.conj()).im * self.mean_q + (g.conj() * phi).re * self.mean_p) / SQRT_2
            + (g.conj() / g * phi * phi / 2.0).im
            - self.phase_integral
    }

    /// Wavefunction written around the moving means `q̄(τ)`, `p̄(τ)`.
    pub fn amplitude_centered(&self, q: f64) -> Complex64 {
        let dq = q - self.mean_q;
        let exponent = self.log_prefactor() - self.f0 / self.g * (dq * dq / 2.0)
            + I * (self.mean_p * (2.0 * q - self.mean_q) / 2.0 + self.varrho());
        exponent.exp()
    }

    /// Gaussian probability density.
    pub fn density(&self, q: f64) -> f64 {
        let s = self.sigma_q();
        let dq = q - self.mean_q;
        (-dq * dq / (2.0 * s * s)).exp() / ((2.0 * PI).sqrt() * s)
    }

    /// `∫ |Φ|² dq` by adaptive quadrature over `q̄ ± 12σ_q`.
    pub fn norm(&self) -> Result<f64> {
        let half = 12.0 * self.sigma_q();
        let tol = Tolerance {
            absolute: 1e-13,
            relative: 1e-14,
            max_subdivisions: 200,
        };
        quadrature::integrate(
            |q| self.amplitude(q).norm_sqr(),
            self.mean_q - half,
            self.mean_q + half,
            tol,
        )
        .map(|i| i.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn unit_seed() -> SeedCoefficients {
        SeedCoefficients::new(c(1.0, 0.0), c(1.0, 0.0)).unwrap()
    }

    fn random_state(rng: &mut ChaCha8Rng) -> GcsState {
        let f0 = Complex64::from_polar(rng.gen_range(0.4..2.5), rng.gen_range(-3.1..3.1));
        let seed = SeedCoefficients::from_f0(f0, rng.gen_range(-2.0..2.0)).unwrap();
        let field = FieldParams::new(rng.gen_range(-2.0..2.0), rng.gen_range(0.0..FRAC_PI_2));
        let zeta = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        GcsState::new(seed, field, zeta).unwrap()
    }

    #[test]
    fn zeta_examples() {
        let seed = unit_seed();
        let z = zeta_from_initial(&seed, SQRT_2, 0.0);
        assert!((z - c(1.0, 0.0)).norm() < 1e-15);
        let any = SeedCoefficients::from_f0(c(0.4, 1.3), 0.9).unwrap();
        assert_eq!(zeta_from_initial(&any, 0.0, 0.0), c(0.0, 0.0));
    }

    #[test]
    fn zeta_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let s = random_state(&mut rng);
            let (q0, p0) = (rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
            let z = zeta_from_initial(s.seed(), q0, p0);
            let (q1, p1) = initial_means(s.seed(), z);
            assert!((q0 - q1).abs() < 1e-12 && (p0 - p1).abs() < 1e-12);
        }
    }

    #[test]
    fn ground_gaussian_peak() {
        let s = GcsState::new(unit_seed(), FieldParams::free(), c(0.0, 0.0)).unwrap();
        let v = s.evaluate(0.0, 0.0).unwrap();
        assert!((v - c(PI.powf(-0.25), 0.0)).norm() < 1e-15);
        assert!((v.re - 0.751126).abs() < 1e-6);
    }

    #[test]
    fn normalized_at_several_times() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let s = random_state(&mut rng);
            for tau in [0.0, 0.7, 2.3] {
                let n = s.at(tau).unwrap().norm().unwrap();
                assert!((n - 1.0).abs() < 1e-8, "norm {n} at {tau}");
            }
        }
    }

    #[test]
    fn both_wavefunction_forms_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let s = random_state(&mut rng);
            let tau = rng.gen_range(0.0..4.0);
            let at = s.at(tau).unwrap();
            for k in -8..=8 {
                let q = at.mean_q() + 0.5 * k as f64 * at.sigma_q();
                let a = at.amplitude(q);
                let b = at.amplitude_centered(q);
                assert!((a - b).norm() < 1e-10 * a.norm().max(1e-3), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn printed_sign_of_phase_integral_in_varrho_disagrees() {
        // ϱ with +∫ReQ/2 differs from the eigenform by exp(2i∫ReQ/2).
        let s = GcsState::new(unit_seed(), FieldParams::new(1.0, FRAC_PI_4), c(0.5, 0.2)).unwrap();
        let at = s.at(0.7).unwrap();
        let printed = at.varrho() + 2.0 * at.phase_integral();
        let phase_gap = (printed - at.varrho()).abs();
        assert!(phase_gap > 1e-2);
    }

    #[test]
    fn density_is_modulus_squared() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let s = random_state(&mut rng);
            let at = s.at(rng.gen_range(0.0..3.0)).unwrap();
            for k in -6..=6 {
                let q = at.mean_q() + 0.7 * k as f64 * at.sigma_q();
                let d = at.density(q);
                assert!((d - at.amplitude(q).norm_sqr()).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn density_examples() {
        let s = GcsState::new(unit_seed(), FieldParams::free(), c(0.3, 0.0)).unwrap();
        let at = s.at(1.0).unwrap();
        assert!((at.sigma_q() - 1.0).abs() < 1e-15);
        let peak = at.density(at.mean_q());
        assert!((peak - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-15);
        assert!((peak - 0.398942).abs() < 1e-6);
        let total = quadrature::integrate(|q| at.density(q), -15.0, 15.0, Tolerance::default())
            .unwrap()
            .value;
        assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn moment_examples() {
        let s = GcsState::new(unit_seed(), FieldParams::new(1.0, FRAC_PI_2), c(0.0, 0.0)).unwrap();
        let m = s.moments(1.6);
        assert!((m.mean_q - 1.6 * 1.6 / 2.0).abs() < 1e-15);
        assert!((m.mean_p - 1.6).abs() < 1e-15);
        let m = s.moments(1.0);
        assert!((m.sigma_q - 1.0).abs() < 1e-15);
        assert!((m.sigma_p - 1.0 / SQRT_2).abs() < 1e-15);
        assert!((m.sigma_qp - 0.5).abs() < 1e-15);
    }

    #[test]
    fn means_agree_with_integral_of_motion_form() {
        // q̄ = √2 Re[g*(ζ − φ)], p̄ = √2 Im[f0*(ζ − φ)]
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..200 {
            let s = random_state(&mut rng);
            let tau = rng.gen_range(0.0..10.0);
            let k = coefficient_functions(s.seed(), s.field(), tau);
            let m = s.moments(tau);
            let q = SQRT_2 * (k.g.conj() * (s.zeta() - k.phi)).re;
            let p = SQRT_2 * (k.f.conj() * (s.zeta() - k.phi)).im;
            assert!((q - m.mean_q).abs() < 1e-11 * (1.0 + q.abs()));
            assert!((p - m.mean_p).abs() < 1e-11 * (1.0 + p.abs()));
            // ζ is also recovered from the moving means
            let z = (k.f * m.mean_q + I * k.g * m.mean_p) / SQRT_2 + k.phi;
            assert!((z - s.zeta()).norm() < 1e-10 * (1.0 + m.mean_q.abs() + m.mean_p.abs()));
        }
    }

    #[test]
    fn covariance_is_real() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let s = random_state(&mut rng);
            let tau = rng.gen_range(0.0..10.0);
            let cov = (s.seed().f0().conj() * s.seed().g(tau) - 1.0) / (2.0 * I);
            assert!(cov.im.abs() < 1e-12);
        }
    }

    #[test]
    fn sigma_q_closed_form_examples() {
        let m = 1.0 / SQRT_2;
        assert!((sigma_q_closed_form(m, m, Branch::Spreading, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((sigma_q_closed_form(m, m, Branch::Spreading, 0.0).unwrap() - m).abs() < 1e-15);

        // |g0| = √2, |f0| = √2, Im(f0 g0*) = −√3
        let g0 = c(SQRT_2, 0.0);
        let f0 = c(1.0, -3f64.sqrt()) / g0;
        let seed = SeedCoefficients::new(f0, g0).unwrap();
        let expected = seed.g(0.5).norm() / SQRT_2;
        let got = sigma_q_closed_form(1.0, 1.0, Branch::Spreading, 0.5).unwrap();
        assert!((got - expected).abs() < 1e-12);

        assert!(matches!(
            sigma_q_closed_form(0.5, 0.5, Branch::Spreading, 1.0),
            Err(Error::HeisenbergViolation { .. })
        ));
    }

    #[test]
    fn spreads_seed_matches_both_branches() {
        for branch in [Branch::Spreading, Branch::Focusing] {
            let seed = seed_from_spreads(0.9, 1.3, branch).unwrap();
            for tau in [0.0, 0.3, 1.7, 6.0] {
                let closed = sigma_q_closed_form(0.9, 1.3, branch, tau).unwrap();
                assert!((closed - seed.g(tau).norm() / SQRT_2).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn focusing_branch_parabola_stays_above_bound() {
        let (sq, sp) = (1.2, 0.8);
        let floor = 1.0 / (4.0 * sp * sp);
        for k in 0..400 {
            let tau = k as f64 * 0.01;
            let s = sigma_q_closed_form(sq, sp, Branch::Focusing, tau).unwrap();
            assert!(s * s >= floor - 1e-12);
            let s_up = sigma_q_closed_form(sq, sp, Branch::Spreading, tau).unwrap();
            assert!(s_up >= sq - 1e-15);
        }
    }

    #[test]
    fn uncertainty_examples() {
        let s = GcsState::new(unit_seed(), FieldParams::new(0.4, 0.2), c(1.0, -1.0)).unwrap();
        let m = s.moments(2.0);
        assert!(((m.sigma_q * m.sigma_p).powi(2) - 1.25).abs() < 1e-14);
        assert!((m.sigma_qp - 1.0).abs() < 1e-15);
        let r = s.check_uncertainty(2.0);
        assert!(r.rs_residual.abs() < 1e-15);
        let cs = GcsState::new(cs_specialize(0.37).unwrap(), FieldParams::free(), c(0.0, 0.0)).unwrap();
        let r0 = cs.check_uncertainty(0.0);
        assert!((r0.heisenberg_product - 0.5).abs() < 1e-15);
        assert!(r0.heisenberg_holds());
    }

    #[test]
    fn rs_identity_sweep() {
        let mut rng = ChaCha8Rng::seed_from_u64(1000);
        for _ in 0..1000 {
            let s = random_state(&mut rng);
            let r = s.check_uncertainty(rng.gen_range(0.0..10.0));
            assert!(r.rs_residual.abs() < 1e-12, "{}", r.rs_residual);
            assert!(r.heisenberg_holds());
        }
    }

    #[test]
    fn cs_specialize_examples() {
        let s = cs_specialize(1.0 / SQRT_2).unwrap();
        assert!((s.f0() - c(1.0, 0.0)).norm() < 1e-15 && (s.g0() - c(1.0, 0.0)).norm() < 1e-15);
        let s = cs_specialize(1.0).unwrap();
        assert!((s.f0().re - 1.0 / SQRT_2).abs() < 1e-15 && (s.g0().re - SQRT_2).abs() < 1e-15);
        assert!((s.f0().norm() / SQRT_2 - 0.5).abs() < 1e-15);
        for sq in [1e-3, 0.2, 7.0, 1e4] {
            let s = cs_specialize(sq).unwrap();
            assert!(((s.f0() * s.g0().conj()).re - 1.0).abs() < 1e-15);
        }
        assert!(cs_specialize(0.0).is_err());
        assert!(cs_specialize(-1.0).is_err());
    }

    #[test]
    fn classical_correspondence_examples() {
        let setup = PhysicalSetup::natural(0.0, 0.0, 1.0).unwrap();
        let vac = GcsState::in_setup(unit_seed(), c(0.0, 0.0), &setup).unwrap();
        assert_eq!(vac.classical_correspondence(&setup), (0.0, 0.0));
        let s = GcsState::in_setup(unit_seed(), c(1.0, 0.0), &setup).unwrap();
        let (z0, p0) = s.classical_correspondence(&setup);
        assert!((z0 - SQRT_2).abs() < 1e-15 && p0.abs() < 1e-15);
    }

    #[test]
    fn correspondence_matches_initial_means_in_units() {
        let setup = PhysicalSetup::new(2.0, -0.7, 3.0, 0.3, 0.9, 0.4, 1.7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..50 {
            let mut s = random_state(&mut rng);
            s = GcsState::in_setup(*s.seed(), s.zeta(), &setup).unwrap();
            let (z0, p0) = s.classical_correspondence(&setup);
            let (q0, pq0) = s.initial_means();
            let (z, p, _) = setup.from_dimensionless(q0, pq0, 0.0);
            assert!((z - z0).abs() < 1e-12 * (1.0 + z.abs()));
            assert!((p - p0).abs() < 1e-12 * (1.0 + p.abs()));
        }
    }

    #[test]
    fn density_mean_follows_classical_trajectory() {
        let setup = PhysicalSetup::new(1.5, 0.8, 1.0, 0.6, 0.7, 1.1, 1.3).unwrap();
        let seed = seed_from_spreads(0.8, 0.9, Branch::Spreading).unwrap();
        let s = GcsState::in_setup(seed, c(0.6, -0.4), &setup).unwrap();
        let (z0, p0) = s.classical_correspondence(&setup);
        for t in [0.0, 0.4, 1.9] {
            let at = s.at(setup.time_to_tau(t)).unwrap();
            let half = 14.0 * at.sigma_q();
            let mean = quadrature::integrate(
                |q| q * at.density(q),
                at.mean_q() - half,
                at.mean_q() + half,
                Tolerance::default(),
            )
            .unwrap()
            .value;
            let (z, _) = setup.classical_trajectory(z0, p0, t);
            assert!(
                (mean * setup.length_scale() - z).abs() < 1e-9,
                "{} vs {z}",
                mean * setup.length_scale()
            );
        }
    }

    #[test]
    fn free_limit_is_continuous() {
        let seed = SeedCoefficients::from_f0(c(0.8, 0.3), -0.4).unwrap();
        let zeta = c(0.7, 0.9);
        let free = GcsState::new(seed, FieldParams::new(0.0, 0.7), zeta).unwrap();
        let weak = GcsState::new(seed, FieldParams::new(1e-12, 0.7), zeta).unwrap();
        for tau in [0.0, 0.5, 2.0] {
            let (a, b) = (free.at(tau).unwrap(), weak.at(tau).unwrap());
            for q in [-2.0, 0.0, 1.0, 3.0] {
                assert!((a.amplitude(q) - b.amplitude(q)).norm() < 1e-8);
            }
            let (ma, mb) = (free.moments(tau), weak.moments(tau));
            assert!((ma.mean_q - mb.mean_q).abs() < 1e-8 && (ma.mean_p - mb.mean_p).abs() < 1e-8);
        }
    }

    #[test]
    fn sqrt_g_is_continuous_across_the_branch_cut() {
        // g(τ) crosses the negative real axis: g0 = −1 + 0.5i, f0 chosen so
        // that Re(f0 g0*) = 1.
        let g0 = c(-1.0, 0.5);
        let f0 = (c(1.0, 0.0) / g0.conj()) * 1.0;
        let seed = SeedCoefficients::new(f0, g0).unwrap();
        let s = GcsState::new(seed, FieldParams::free(), c(0.0, 0.0)).unwrap();
        let mut prev = s.at(0.0).unwrap().sqrt_g();
        for k in 1..=400 {
            let cur = s.at(k as f64 * 0.01).unwrap().sqrt_g();
            assert!((cur - prev).norm() < 0.05, "jump at step {k}");
            prev = cur;
        }
    }
}
