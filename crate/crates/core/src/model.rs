//! Dimensional reduction: channel parameters, potentials and the effective
//! one-dimensional radial equation
//!
//! ```text
//! y'' + [k² − (λ² − 1/4)/r² − μV(r)] y = μ r^p Σᵢⱼ Cᵢⱼ gᵢ(r) ∫ gⱼ(r') r'^p y(r') dr'
//! ```
//!
//! with λ = l + (q − 2)/2 and p = (q − 1)/2, in units where ħ²/2m = 1.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// λ = l + (q − 2)/2. Works over reals or complex numbers.
pub fn lambda_of<T>(q: T, l: T) -> T
where
    T: std::ops::Add<Output = T> + std::ops::Sub<Output = T> + std::ops::Div<Output = T> + From<f64>,
{
    l + (q - T::from(2.0)) / T::from(2.0)
}

/// λ² − 1/4, the coefficient of −1/r² in the reduced equation.
pub fn centrifugal_coefficient(lambda: Complex64) -> Complex64 {
    lambda * lambda - 0.25
}

/// Same as [`centrifugal_coefficient`] for real λ.
pub fn centrifugal_coefficient_real(lambda: f64) -> f64 {
    lambda * lambda - 0.25
}

/// Partial-wave channel (q, l). Both may be complex in continuation contexts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub q: Complex64,
    pub l: Complex64,
}

impl ChannelParams {
    pub fn new(q: f64, l: f64) -> Self {
        Self { q: Complex64::new(q, 0.0), l: Complex64::new(l, 0.0) }
    }

    pub fn complex(q: Complex64, l: Complex64) -> Self {
        Self { q, l }
    }

    /// A channel that realises a given λ in q = 3 (l = λ − 1/2).
    pub fn from_lambda(lambda: Complex64) -> Self {
        Self { q: Complex64::new(3.0, 0.0), l: lambda - 0.5 }
    }

    pub fn lambda(&self) -> Complex64 {
        lambda_of(self.q, self.l)
    }

    pub fn is_real(&self) -> bool {
        self.q.im == 0.0 && self.l.im == 0.0
    }

    /// Real λ, refusing complex channels.
    pub fn real_lambda(&self) -> Result<f64> {
        if !self.is_real() {
            return Err(Error::InvalidInput(format!(
                "channel (q={}, l={}) is complex; a real channel is required here",
                self.q, self.l
            )));
        }
        Ok(self.lambda().re)
    }

    /// λ for the bound-state / Levinson pipeline: real q > 2, real l ≥ 0.
    pub fn spectral_lambda(&self) -> Result<f64> {
        let lambda = self.real_lambda()?;
        if self.q.re <= 2.0 || self.l.re < 0.0 || lambda <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "lambda={lambda} unsupported (half-bound regime): need q > 2 and l >= 0"
            )));
        }
        Ok(lambda)
    }

    /// Exponent p = (q − 1)/2 of the kernel weight r^p. Real channels only.
    pub fn weight_exponent(&self) -> Result<f64> {
        if self.q.im != 0.0 {
            return Err(Error::InvalidInput(
                "kernel weights r^((q-1)/2) are multivalued for complex q".into(),
            ));
        }
        Ok(0.5 * (self.q.re - 1.0))
    }
}

/// Energy in reduced units (E = k² above threshold, E = −κ² below).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyValue {
    pub e: f64,
}

impl EnergyValue {
    pub fn from_energy(e: f64) -> Self {
        Self { e }
    }

    pub fn from_k(k: f64) -> Self {
        Self { e: k * k }
    }

    /// k = √E for E > 0, κ = √(−E) otherwise.
    pub fn wavenumber(&self) -> f64 {
        self.e.abs().sqrt()
    }

    pub fn is_scattering(&self) -> bool {
        self.e > 0.0
    }
}

/// y(r) = r^((q−1)/2) ψ(r).
pub fn reduce_wavefunction(r: &[f64], psi: &[Complex64], q: f64) -> Result<Vec<Complex64>> {
    rescale(r, psi, 0.5 * (q - 1.0))
}

/// ψ(r) = r^(−(q−1)/2) y(r).
pub fn unreduce_wavefunction(r: &[f64], y: &[Complex64], q: f64) -> Result<Vec<Complex64>> {
    rescale(r, y, -0.5 * (q - 1.0))
}

fn rescale(r: &[f64], v: &[Complex64], exponent: f64) -> Result<Vec<Complex64>> {
    if r.len() != v.len() {
        return Err(Error::InvalidInput(format!(
            "grid has {} points but {} values were given",
            r.len(),
            v.len()
        )));
    }
    r.iter()
        .zip(v)
        .map(|(&ri, &vi)| {
            if !(ri > 0.0) {
                return Err(Error::InvalidInput(format!("nonpositive grid point r={ri}")));
            }
            Ok(vi * ri.powf(exponent))
        })
        .collect()
}

/// Local potential V(r), zero for r ≥ r0.
#[derive(Clone)]
pub enum LocalPotential {
    Zero,
    /// V = −depth for r < r0.
    SquareWell { depth: f64 },
    /// V = −depth·e^{−r/range} for r < r0.
    Exponential { depth: f64, range: f64 },
    /// V = −depth·e^{−(r/width)²} for r < r0.
    Gaussian { depth: f64, width: f64 },
    /// Linear interpolation through (r, V) samples; constant extrapolation
    /// below the first sample.
    Tabulated(Arc<Tabulated>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tabulated {
    r: Vec<f64>,
    v: Vec<f64>,
}

impl Tabulated {
    pub fn new(r: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if r.len() != v.len() || r.len() < 2 {
            return Err(Error::InvalidInput("tabulated potential needs >= 2 (r, V) pairs".into()));
        }
        if r.windows(2).any(|w| !(w[1] > w[0])) || !(r[0] >= 0.0) {
            return Err(Error::InvalidInput("tabulated r values must be increasing and >= 0".into()));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("tabulated V values must be finite".into()));
        }
        Ok(Self { r, v })
    }

    /// Parses two-column CSV text `r,V`; a non-numeric first line is taken
    /// as a header.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut r = Vec::new();
        let mut v = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split(',').map(str::trim);
            let (a, b) = match (cols.next(), cols.next(), cols.next()) {
                (Some(a), Some(b), None) => (a, b),
                _ => {
                    return Err(Error::InvalidInput(format!(
                        "potential CSV line {}: expected two columns",
                        i + 1
                    )))
                }
            };
            match (a.parse::<f64>(), b.parse::<f64>()) {
                (Ok(x), Ok(y)) => {
                    r.push(x);
                    v.push(y);
                }
                _ if r.is_empty() && i == 0 => continue,
                _ => {
                    return Err(Error::InvalidInput(format!(
                        "potential CSV line {}: cannot parse '{line}'",
                        i + 1
                    )))
                }
            }
        }
        Self::new(r, v)
    }

    fn eval(&self, x: f64) -> f64 {
        let n = self.r.len();
        if x <= self.r[0] {
            return self.v[0];
        }
        if x >= self.r[n - 1] {
            return self.v[n - 1];
        }
        let j = self.r.partition_point(|&ri| ri <= x);
        let (r0, r1) = (self.r[j - 1], self.r[j]);
        let t = (x - r0) / (r1 - r0);
        self.v[j - 1] * (1.0 - t) + self.v[j] * t
    }

    fn max_abs(&self) -> f64 {
        self.v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }
}

impl fmt::Debug for LocalPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalPotential::Zero => write!(f, "Zero"),
            LocalPotential::SquareWell { depth } => write!(f, "SquareWell(depth={depth})"),
            LocalPotential::Exponential { depth, range } => {
                write!(f, "Exponential(depth={depth}, range={range})")
            }
            LocalPotential::Gaussian { depth, width } => {
                write!(f, "Gaussian(depth={depth}, width={width})")
            }
            LocalPotential::Tabulated(t) => write!(f, "Tabulated({} points)", t.r.len()),
        }
    }
}

impl LocalPotential {
    /// Profile value ignoring the cutoff.
    fn profile(&self, r: f64) -> f64 {
        match self {
            LocalPotential::Zero => 0.0,
            LocalPotential::SquareWell { depth } => -depth,
            LocalPotential::Exponential { depth, range } => -depth * (-r / range).exp(),
            LocalPotential::Gaussian { depth, width } => {
                let t = r / width;
                -depth * (-t * t).exp()
            }
            LocalPotential::Tabulated(t) => t.eval(r),
        }
    }

    fn max_abs(&self) -> f64 {
        match self {
            LocalPotential::Zero => 0.0,
            LocalPotential::SquareWell { depth }
            | LocalPotential::Exponential { depth, .. }
            | LocalPotential::Gaussian { depth, .. } => depth.abs(),
            LocalPotential::Tabulated(t) => t.max_abs(),
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            LocalPotential::Zero => true,
            LocalPotential::SquareWell { depth }
            | LocalPotential::Exponential { depth, .. }
            | LocalPotential::Gaussian { depth, .. } => *depth == 0.0,
            LocalPotential::Tabulated(t) => t.v.iter().all(|&v| v == 0.0),
        }
    }
}

/// Radial profile g(r) of one separable kernel term, zero for r ≥ r0.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelProfile {
    /// e^{−((r − center)/width)²}
    GaussianBump { center: f64, width: f64 },
    /// r^a (r0 − r)^b, normalised to peak value 1.
    PolynomialBump { a: f64, b: f64 },
    /// Smooth bump (r − lo)²(hi − r)² on [lo, hi] ⊂ [0, r0], peak 1.
    Window { lo: f64, hi: f64 },
}

impl KernelProfile {
    fn eval(&self, r: f64, r0: f64) -> f64 {
        if r >= r0 || r < 0.0 {
            return 0.0;
        }
        match *self {
            KernelProfile::GaussianBump { center, width } => {
                let t = (r - center) / width;
                (-t * t).exp()
            }
            KernelProfile::PolynomialBump { a, b } => {
                // peak at r* = a r0/(a+b)
                let rs = a * r0 / (a + b);
                let peak = rs.powf(a) * (r0 - rs).powf(b);
                r.powf(a) * (r0 - r).powf(b) / peak
            }
            KernelProfile::Window { lo, hi } => {
                if r <= lo || r >= hi {
                    0.0
                } else {
                    let h = 0.5 * (hi - lo);
                    (r - lo) * (r - lo) * (hi - r) * (hi - r) / (h * h * h * h)
                }
            }
        }
    }

    /// Support [lo, hi] of the profile before truncation at r0.
    pub fn support(&self) -> (f64, f64) {
        match *self {
            KernelProfile::GaussianBump { .. } => (0.0, f64::INFINITY),
            KernelProfile::PolynomialBump { .. } => (0.0, f64::NAN),
            KernelProfile::Window { lo, hi } => (lo, hi),
        }
    }

    /// Points where the profile is not smooth (inside (0, r0)).
    pub fn breakpoints(&self) -> Vec<f64> {
        match *self {
            KernelProfile::Window { lo, hi } => vec![lo, hi],
            _ => Vec::new(),
        }
    }

    fn validate(&self, r0: f64) -> Result<()> {
        match *self {
            KernelProfile::GaussianBump { width, .. } if !(width > 0.0) => {
                Err(Error::InvalidInput("gaussian kernel bump needs width > 0".into()))
            }
            KernelProfile::PolynomialBump { a, b } if !(a >= 0.0 && b > 0.0) => {
                Err(Error::InvalidInput("polynomial kernel bump needs a >= 0, b > 0".into()))
            }
            KernelProfile::Window { lo, hi } if !(lo >= 0.0 && hi > lo) => {
                Err(Error::InvalidInput("window kernel needs 0 <= lo < hi".into()))
            }
            KernelProfile::Window { hi, .. } if hi > r0 => Err(Error::InvalidInput(format!(
                "kernel support [.., {hi}] exceeds the cutoff r0={r0}: U(r, r') must vanish for r >= r0"
            ))),
            _ => Ok(()),
        }
    }
}

/// Finite-rank kernel U(r, r') = Σᵢⱼ Cᵢⱼ gᵢ(r) gⱼ(r').
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SeparableKernel {
    profiles: Vec<KernelProfile>,
    coupling: Vec<Vec<f64>>,
}

impl SeparableKernel {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Diagonal coupling: U = Σᵢ sᵢ gᵢ(r) gᵢ(r').
    pub fn diagonal(terms: Vec<(KernelProfile, f64)>) -> Self {
        let n = terms.len();
        let mut coupling = vec![vec![0.0; n]; n];
        let mut profiles = Vec::with_capacity(n);
        for (i, (g, s)) in terms.into_iter().enumerate() {
            coupling[i][i] = s;
            profiles.push(g);
        }
        Self { profiles, coupling }
    }

    /// Full symmetric coupling matrix.
    pub fn with_coupling(profiles: Vec<KernelProfile>, coupling: Vec<Vec<f64>>) -> Result<Self> {
        let kernel = Self::with_unchecked_coupling(profiles, coupling)?;
        let n = kernel.rank();
        for i in 0..n {
            for j in 0..i {
                if kernel.coupling[i][j] != kernel.coupling[j][i] {
                    return Err(Error::InvalidInput(format!(
                        "coupling matrix not symmetric at ({i},{j}): U(r,r') must equal U(r',r)"
                    )));
                }
            }
        }
        Ok(kernel)
    }

    /// Any square coupling matrix, symmetric or not. Non-symmetric kernels
    /// violate the Green identity and exist for negative-control checks.
    pub fn with_unchecked_coupling(
        profiles: Vec<KernelProfile>,
        coupling: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let n = profiles.len();
        if coupling.len() != n || coupling.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidInput(format!("coupling matrix must be {n}x{n}")));
        }
        if coupling.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("coupling entries must be finite".into()));
        }
        Ok(Self { profiles, coupling })
    }

    pub fn rank(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty() || self.coupling.iter().flatten().all(|&c| c == 0.0)
    }

    pub fn profiles(&self) -> &[KernelProfile] {
        &self.profiles
    }

    pub fn coupling(&self) -> &[Vec<f64>] {
        &self.coupling
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.rank();
        (0..n).all(|i| (0..i).all(|j| self.coupling[i][j] == self.coupling[j][i]))
    }

    /// U(r, r') for a given cutoff.
    pub fn eval(&self, r: f64, rp: f64, r0: f64) -> f64 {
        let g: Vec<f64> = self.profiles.iter().map(|p| p.eval(r, r0)).collect();
        let gp: Vec<f64> = self.profiles.iter().map(|p| p.eval(rp, r0)).collect();
        // pairs (i, j) and (j, i) are added together so a symmetric coupling
        // gives U(r, r') == U(r', r) bit for bit
        let c = &self.coupling;
        let mut u = 0.0;
        for i in 0..c.len() {
            u += c[i][i] * (g[i] * gp[i]);
            for j in 0..i {
                u += c[i][j] * (g[i] * gp[j]) + c[j][i] * (g[j] * gp[i]);
            }
        }
        u
    }

    fn strength_bound(&self) -> f64 {
        self.coupling.iter().flatten().fold(0.0f64, |m, c| m.max(c.abs()))
    }
}

/// Local potential with cutoff r0, separable kernel, and coupling scale μ.
#[derive(Debug, Clone)]
pub struct PotentialModel {
    pub local: LocalPotential,
    pub r0: f64,
    pub kernel: SeparableKernel,
    pub mu: f64,
}

impl PotentialModel {
    pub fn new(local: LocalPotential, r0: f64) -> Result<Self> {
        Self::with_kernel(local, r0, SeparableKernel::empty())
    }

    pub fn with_kernel(local: LocalPotential, r0: f64, kernel: SeparableKernel) -> Result<Self> {
        if !(r0 > 0.0) || !r0.is_finite() {
            return Err(Error::InvalidInput(format!("cutoff r0 must be positive, got {r0}")));
        }
        match &local {
            LocalPotential::Exponential { range, .. } if !(*range > 0.0) => {
                return Err(Error::InvalidInput("exponential potential needs range > 0".into()))
            }
            LocalPotential::Gaussian { width, .. } if !(*width > 0.0) => {
                return Err(Error::InvalidInput("gaussian potential needs width > 0".into()))
            }
            _ => {}
        }
        for g in kernel.profiles() {
            g.validate(r0)?;
        }
        Ok(Self { local, r0, kernel, mu: 1.0 })
    }

    pub fn free(r0: f64) -> Result<Self> {
        Self::new(LocalPotential::Zero, r0)
    }

    pub fn square_well(depth: f64, r0: f64) -> Result<Self> {
        Self::new(LocalPotential::SquareWell { depth }, r0)
    }

    /// Copy with a different coupling scale.
    pub fn at_mu(&self, mu: f64) -> Self {
        Self { mu, ..self.clone() }
    }

    /// V(r) without the μ factor; zero for r ≥ r0.
    pub fn local_value(&self, r: f64) -> f64 {
        if r >= self.r0 {
            0.0
        } else {
            self.local.profile(r)
        }
    }

    /// gᵢ(r); zero for r ≥ r0.
    pub fn kernel_profile(&self, i: usize, r: f64) -> f64 {
        self.kernel.profiles[i].eval(r, self.r0)
    }

    pub fn max_abs_local(&self) -> f64 {
        self.local.max_abs()
    }

    pub fn kernel_strength_bound(&self) -> f64 {
        self.kernel.strength_bound()
    }

    pub fn has_kernel(&self) -> bool {
        !self.kernel.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.mu == 0.0 || (self.local.is_zero() && self.kernel.is_empty())
    }
}

/// Effective equation at fixed (λ, E, μ):
/// y'' + Q(r) y = kernel source, Q(r) = k² − (λ² − 1/4)/r² − μV(r).
#[derive(Debug, Clone)]
pub struct EffectiveEquation {
    pub lambda: Complex64,
    /// k² (= E); complex when k is.
    pub k2: Complex64,
    pub potential: PotentialModel,
    /// Exponent p of the kernel weights r^p; `None` if there is no kernel.
    pub weight_exponent: Option<f64>,
    centrifugal: Complex64,
}

impl EffectiveEquation {
    pub fn q_coeff(&self, r: f64) -> Complex64 {
        self.k2 - self.centrifugal / (r * r) - self.potential.mu * self.potential.local_value(r)
    }

    /// Q evaluated as the left limit at r0 when `interior` is set, so that a
    /// potential discontinuous at r0 is seen from inside.
    pub(crate) fn q_coeff_side(&self, r: f64, interior: bool) -> Complex64 {
        self.q_coeff(if interior { left_limit(r, self.potential.r0) } else { r })
    }

    pub fn centrifugal(&self) -> Complex64 {
        self.centrifugal
    }

    pub fn r0(&self) -> f64 {
        self.potential.r0
    }

    pub fn mu(&self) -> f64 {
        self.potential.mu
    }

    /// True when the kernel contributes (non-empty and μ ≠ 0).
    pub fn has_active_kernel(&self) -> bool {
        self.potential.mu != 0.0 && self.potential.has_kernel()
    }

    /// Kernel source profile sⱼ(r) = r^p gⱼ(r) (left limit at r0 when
    /// `interior`).
    pub(crate) fn source_profile(&self, j: usize, r: f64, interior: bool) -> f64 {
        let p = self.weight_exponent.unwrap_or(0.0);
        let rr = if interior { left_limit(r, self.potential.r0) } else { r };
        rr.powf(p) * self.potential.kernel_profile(j, rr)
    }

    /// Copy with λ replaced (used for the φ(−λ) partner).
    pub fn with_lambda(&self, lambda: Complex64) -> Self {
        Self { lambda, centrifugal: centrifugal_coefficient(lambda), ..self.clone() }
    }

    /// Copy with k² replaced.
    pub fn with_k2(&self, k2: Complex64) -> Self {
        Self { k2, ..self.clone() }
    }
}

pub(crate) fn left_limit(r: f64, r0: f64) -> f64 {
    if r >= r0 {
        f64::from_bits(r0.to_bits() - 1)
    } else {
        r
    }
}

/// Packages (channel, potential, energy) as an equation for the ODE engine.
pub fn effective_equation(
    channel: &ChannelParams,
    potential: &PotentialModel,
    energy: EnergyValue,
) -> Result<EffectiveEquation> {
    effective_equation_k2(channel, potential, Complex64::new(energy.e, 0.0))
}

/// As [`effective_equation`] with a complex k².
pub fn effective_equation_k2(
    channel: &ChannelParams,
    potential: &PotentialModel,
    k2: Complex64,
) -> Result<EffectiveEquation> {
    let lambda = channel.lambda();
    let weight_exponent = if potential.has_kernel() {
        let lam = channel.real_lambda()?;
        if lam == 0.0 {
            return Err(Error::InvalidInput(
                "lambda=0 with a non-local kernel (half-bound regime) is excluded".into(),
            ));
        }
        Some(channel.weight_exponent()?)
    } else {
        None
    };
    Ok(EffectiveEquation {
        lambda,
        k2,
        potential: potential.clone(),
        weight_exponent,
        centrifugal: centrifugal_coefficient(lambda),
    })
}
