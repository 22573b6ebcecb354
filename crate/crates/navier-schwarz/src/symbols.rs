//! Fourier-symbol analysis of two-half-plane Schwarz iterations for the
//! time-harmonic Navier equations.
//!
//! Every quantity here is a closed-form function of the tangential wavenumber
//! `k` along a straight interface between the half planes. The per-mode decay
//! rates are `lambda1 = sqrt(k^2 - omega^2/cs^2)` (shear branch) and
//! `lambda2 = sqrt(k^2 - omega^2/cp^2)` (pressure branch), with the principal
//! square root taken as `+i sqrt(omega^2/c^2 - k^2)` below the cutoffs. A
//! double iteration of the Schwarz method multiplies each mode's error by the
//! eigenvalues `r_plus`, `r_minus` of a 2x2 interface map, from which the
//! contraction factor `rho(k)` follows.
//!
//! Evaluation is arranged to stay accurate for `k >> omega`: the entries of
//! the interface maps grow like `k^2/omega^2` there while their determinants
//! and differences stay O(1), so the naive formulas cancel catastrophically.
//! Quantities such as `k^2 - lambda1 lambda2` are computed in cancellation-free
//! rational forms, and eigenvalue extraction pairs the principal-branch root
//! with a product fallback. Cross-checked against 50-digit arithmetic, the
//! implementations here agree with exact values to a few 1e-13 absolute over
//! `k in [0.05, 40]`, `omega = 1`.

use num_complex::Complex64;

use crate::{ElasticMedium, Error, Result};

/// Per-mode decay rates of the shear (`lambda1`) and pressure (`lambda2`)
/// branches at tangential wavenumber `k`.
#[derive(Debug, Clone, Copy)]
pub struct ModeRoots {
    /// Wavenumber the roots were evaluated at.
    pub k: f64,
    /// Angular frequency.
    pub omega: f64,
    /// Shear-branch root, `lambda1^2 = k^2 - omega^2/cs^2`.
    pub lambda1: Complex64,
    /// Pressure-branch root, `lambda2^2 = k^2 - omega^2/cp^2`.
    pub lambda2: Complex64,
}

/// A 2x2 complex matrix-valued interface symbol `S(k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmissionSymbol {
    /// Row-major entries.
    pub entries: [[Complex64; 2]; 2],
}

impl TransmissionSymbol {
    /// Applies the symbol to a 2-vector.
    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        [
            self.entries[0][0] * v[0] + self.entries[0][1] * v[1],
            self.entries[1][0] * v[0] + self.entries[1][1] * v[1],
        ]
    }

    /// The partner symbol across the interface: off-diagonal signs flipped.
    pub fn mirrored(&self) -> Self {
        Self {
            entries: [
                [self.entries[0][0], -self.entries[0][1]],
                [-self.entries[1][0], self.entries[1][1]],
            ],
        }
    }

    /// True if all entries are finite.
    pub fn is_finite(&self) -> bool {
        self.entries
            .iter()
            .flatten()
            .all(|e| e.re.is_finite() && e.im.is_finite())
    }
}

/// Eigenvalues of the double-step interface map and the resulting
/// per-iteration contraction estimate at one wavenumber.
#[derive(Debug, Clone, Copy)]
pub struct RhoResult {
    /// Wavenumber.
    pub k: f64,
    /// The `+` branch eigenvalue.
    pub r_plus: Complex64,
    /// The `-` branch eigenvalue.
    pub r_minus: Complex64,
    /// Contraction factor `max(|r_plus|, |r_minus|)^exponent`.
    pub rho: f64,
    /// Exponent applied to the spectral radius: 1 for the classical
    /// (Dirichlet) iteration, 1/2 for the general transmission-condition one.
    pub exponent: f64,
}

/// Computes the mode decay rates for wavenumber `k`.
///
/// Branch rule: real nonnegative root when `k^2 >= omega^2/c^2`, otherwise
/// `+i sqrt(omega^2/c^2 - k^2)` (positive imaginary part), so that
/// `exp(-lambda x)` never grows for `x > 0`.
pub fn mode_roots(k: f64, omega: f64, medium: &ElasticMedium) -> ModeRoots {
    let branch = |c: f64| -> Complex64 {
        let t = k * k - (omega / c) * (omega / c);
        if t >= 0.0 {
            Complex64::new(t.sqrt(), 0.0)
        } else {
            Complex64::new(0.0, (-t).sqrt())
        }
    };
    ModeRoots {
        k,
        omega,
        lambda1: branch(medium.cs),
        lambda2: branch(medium.cp),
    }
}

/// `k^2 - lambda1 lambda2` without cancellation.
///
/// For `k >= omega/cs` both roots are real and close to `k`, and the direct
/// difference loses a factor `(k/omega)^2` of precision. The rational form
/// `omega^2 (k^2 (cs^-2 + cp^-2) - omega^2 cs^-2 cp^-2) / (k^2 + l1 l2)`
/// is exact and its denominator is a sum of positives there. Below the shear
/// cutoff the direct form has no cancellation and is used as is.
fn k2_minus_l1l2(roots: &ModeRoots, medium: &ElasticMedium) -> Complex64 {
    let (k, w) = (roots.k, roots.omega);
    let k2 = Complex64::new(k * k, 0.0);
    if k * medium.cs >= w {
        let ics2 = 1.0 / (medium.cs * medium.cs);
        let icp2 = 1.0 / (medium.cp * medium.cp);
        let num = w * w * (k * k * (ics2 + icp2) - w * w * ics2 * icp2);
        Complex64::new(num, 0.0) / (k2 + roots.lambda1 * roots.lambda2)
    } else {
        k2 - roots.lambda1 * roots.lambda2
    }
}

/// `lambda1 - lambda2` without cancellation, via
/// `(lambda1^2 - lambda2^2) / (lambda1 + lambda2)`.
fn l1_minus_l2(roots: &ModeRoots, medium: &ElasticMedium) -> Complex64 {
    let w = roots.omega;
    if roots.k * medium.cs >= w {
        let diff = w * w * (1.0 / (medium.cp * medium.cp) - 1.0 / (medium.cs * medium.cs));
        Complex64::new(diff, 0.0) / (roots.lambda1 + roots.lambda2)
    } else {
        roots.lambda1 - roots.lambda2
    }
}

/// Eigenvalues `r_pm = X^2/2 + Y +- sqrt(X^2 (X^2 + 4Y))/2` of the double-step
/// map, i.e. the roots of `r^2 - (X^2 + 2Y) r + Y^2`.
///
/// The principal-branch discriminant root keeps the `+`/`-` labels; whichever
/// branch would cancel against the trace is recovered as `Y^2 / r_other`.
fn two_step_eigenvalues(x: Complex64, y: Complex64) -> (Complex64, Complex64) {
    let t = x * x + 2.0 * y;
    let det = y * y;
    let s = (x * x * (x * x + 4.0 * y)).sqrt();
    if (t.conj() * s).re >= 0.0 {
        let rp = (t + s) / 2.0;
        let rm = if rp.norm() > 0.0 { det / rp } else { (t - s) / 2.0 };
        (rp, rm)
    } else {
        let rm = (t - s) / 2.0;
        let rp = if rm.norm() > 0.0 { det / rm } else { (t + s) / 2.0 };
        (rp, rm)
    }
}

/// Which cutoff wavenumber `k` coincides with, if any (relative tol 1e-12).
enum Cutoff {
    Shear,
    Pressure,
}

fn at_cutoff(k: f64, omega: f64, medium: &ElasticMedium) -> Option<Cutoff> {
    let ks = omega / medium.cs;
    let kp = omega / medium.cp;
    if (k - ks).abs() <= 1e-12 * ks {
        Some(Cutoff::Shear)
    } else if (k - kp).abs() <= 1e-12 * kp {
        Some(Cutoff::Pressure)
    } else {
        None
    }
}

fn check_k_omega(k: f64, omega: f64) -> Result<()> {
    if !(k >= 0.0) || !k.is_finite() {
        return Err(Error::Domain(format!("wavenumber must be finite and >= 0, got {k}")));
    }
    if !(omega > 0.0) {
        return Err(Error::Domain(format!("frequency must be positive, got {omega}")));
    }
    Ok(())
}

/// Convergence factor of the classical (Dirichlet-exchange) Schwarz iteration
/// with overlap `delta`.
///
/// `X = ((k^2 + l1 l2)/(k^2 - l1 l2)) (e^{-l1 d} - e^{-l2 d})`,
/// `Y = e^{-d (l1 + l2)}`, and `rho = max(|r_plus|, |r_minus|)`. At the two
/// cutoff wavenumbers the limit values are returned directly: `r_plus = 1`
/// with `r_minus = e^{-2 l2 delta}` at `k = omega/cs`, and `r_minus = e^{-2
/// l1 delta}` at `k = omega/cp`; the iteration stagnates (`rho = 1`) at both.
pub fn rho_classical(
    k: f64,
    omega: f64,
    medium: &ElasticMedium,
    delta: f64,
) -> Result<RhoResult> {
    check_k_omega(k, omega)?;
    if !(delta >= 0.0) {
        return Err(Error::Domain(format!("overlap must be >= 0, got {delta}")));
    }
    let roots = mode_roots(k, omega, medium);
    if let Some(cut) = at_cutoff(k, omega, medium) {
        let (r_plus, r_minus) = match cut {
            Cutoff::Shear => (Complex64::new(1.0, 0.0), (-2.0 * delta * roots.lambda2).exp()),
            Cutoff::Pressure => (Complex64::new(1.0, 0.0), (-2.0 * delta * roots.lambda1).exp()),
        };
        return Ok(RhoResult { k, r_plus, r_minus, rho: 1.0, exponent: 1.0 });
    }
    let kml = k2_minus_l1l2(&roots, medium);
    let scale = (k * k).max((roots.lambda1 * roots.lambda2).norm());
    if kml.norm() < 1e-12 * scale {
        return Err(Error::SingularPoint { k, reason: "k^2 = lambda1 lambda2 pole".into() });
    }
    let ratio = (Complex64::new(k * k, 0.0) + roots.lambda1 * roots.lambda2) / kml;
    let e1 = (-delta * roots.lambda1).exp();
    let e2 = (-delta * roots.lambda2).exp();
    let x = ratio * (e1 - e2);
    let y = e1 * e2;
    let (r_plus, r_minus) = two_step_eigenvalues(x, y);
    Ok(RhoResult {
        k,
        r_plus,
        r_minus,
        rho: r_plus.norm().max(r_minus.norm()),
        exponent: 1.0,
    })
}

/// The transparent-condition symbols `(S1, S2)` that make the Schwarz method
/// converge in two iterations for every overlap.
///
/// With `d = k^2 - lambda1 lambda2`:
/// `S1 = [[rho l1 w^2/d, i k rho (2 cs^2 - w^2/d)], [-i k rho (2 cs^2 - w^2/d), rho l2 w^2/d]]`
/// and `S2` flips the off-diagonal signs.
pub fn optimal_symbols(
    k: f64,
    omega: f64,
    medium: &ElasticMedium,
) -> Result<(TransmissionSymbol, TransmissionSymbol)> {
    check_k_omega(k, omega)?;
    let roots = mode_roots(k, omega, medium);
    let d = k2_minus_l1l2(&roots, medium);
    let scale = (k * k).max((roots.lambda1 * roots.lambda2).norm());
    if d.norm() < 1e-12 * scale {
        return Err(Error::SingularPoint { k, reason: "k^2 = lambda1 lambda2 pole".into() });
    }
    let rho = medium.rho;
    let w2 = omega * omega;
    let ik = Complex64::new(0.0, k);
    let off = ik * rho * (2.0 * medium.cs * medium.cs - w2 / d);
    let s1 = TransmissionSymbol {
        entries: [
            [rho * w2 * roots.lambda1 / d, off],
            [-off, rho * w2 * roots.lambda2 / d],
        ],
    };
    let s2 = s1.mirrored();
    Ok((s1, s2))
}

/// Low-frequency Taylor approximations of the transparent symbols.
///
/// Order 0 is `S1 = i rho omega diag(cp, cs)`; order 2 adds the quadratic
/// diagonal and linear off-diagonal corrections. `S2` flips the off-diagonal
/// signs. Orders other than 0 and 2 are rejected.
pub fn taylor_symbols(
    order: usize,
    k: f64,
    omega: f64,
    medium: &ElasticMedium,
) -> Result<(TransmissionSymbol, TransmissionSymbol)> {
    check_k_omega(k, omega)?;
    let (rho, cp, cs) = (medium.rho, medium.cp, medium.cs);
    let i = Complex64::new(0.0, 1.0);
    let mut s1 = [[Complex64::default(); 2]; 2];
    s1[0][0] = i * rho * omega * cp;
    s1[1][1] = i * rho * omega * cs;
    match order {
        0 => {}
        2 => {
            s1[0][0] += i * rho * cp * cp / (2.0 * omega) * (cp - 2.0 * cs) * k * k;
            s1[0][1] = -i * rho * (cp - 2.0 * cs) * cs * k;
            s1[1][0] = i * rho * (cp - 2.0 * cs) * cs * k;
            s1[1][1] += i * rho * cs * cs / (2.0 * omega) * (cs - 2.0 * cp) * k * k;
        }
        other => {
            return Err(Error::Usage(format!("unsupported Taylor order {other}, expected 0 or 2")));
        }
    }
    let s1 = TransmissionSymbol { entries: s1 };
    let s2 = s1.mirrored();
    Ok((s1, s2))
}

/// Traction of the mode `u(x, y) = amp e^{dec x} e^{i k y}` at `x = 0` for
/// the unit normal `(1, 0)`:
/// `T = ((lam + 2 mu) u_x' + i k lam u_y, mu (u_y' + i k u_x))`.
fn traction_x(amp: [Complex64; 2], dec: Complex64, k: f64, medium: &ElasticMedium) -> [Complex64; 2] {
    let (lam, mu) = (medium.lambda, medium.mu);
    let ik = Complex64::new(0.0, k);
    [
        (lam + 2.0 * mu) * dec * amp[0] + ik * lam * amp[1],
        mu * (dec * amp[1] + ik * amp[0]),
    ]
}

/// Interface matrices of the transmission-condition exchange.
///
/// Columns apply `-T + S2` to the shear and pressure mode traces: `B2` on the
/// decaying family `(i k, l1)`, `(-l2, i k)` and `B1` on the growing family
/// `(i k, -l1)`, `(l2, i k)`. The double-step map is `B2^{-1} B1` weighted by
/// the overlap exponentials.
fn interface_matrices(
    roots: &ModeRoots,
    medium: &ElasticMedium,
    s2hat: &TransmissionSymbol,
) -> ([[Complex64; 2]; 2], [[Complex64; 2]; 2]) {
    let k = roots.k;
    let ik = Complex64::new(0.0, k);
    let (l1, l2) = (roots.lambda1, roots.lambda2);
    let col = |amp: [Complex64; 2], dec: Complex64| -> [Complex64; 2] {
        let t = traction_x(amp, dec, k, medium);
        let s = s2hat.apply(amp);
        [s[0] - t[0], s[1] - t[1]]
    };
    let c2s = col([ik, l1], -l1);
    let c2p = col([-l2, ik], -l2);
    let c1s = col([ik, -l1], l1);
    let c1p = col([l2, ik], l2);
    // Row-major with the shear mode in column 0.
    let b2 = [[c2s[0], c2p[0]], [c2s[1], c2p[1]]];
    let b1 = [[c1s[0], c1p[0]], [c1s[1], c1p[1]]];
    (b2, b1)
}

fn det2x2(m: &[[Complex64; 2]; 2]) -> Complex64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

fn frob2(m: &[[Complex64; 2]; 2]) -> f64 {
    m.iter().flatten().map(Complex64::norm_sqr).sum()
}

/// Convergence factor of the Schwarz iteration with transmission symbol
/// `S2hat` (its partner `S1hat` enters through the mirrored sign relation)
/// and overlap `delta`.
///
/// Builds the interface matrices `B1`, `B2`, then evaluates
/// `X = e1 b11 - e2 b22` and `Y = e1 e2 det(B)` for `B = B2^{-1} B1`, and the
/// double-step eigenvalues `r_pm`; `rho = max(|r_plus|, |r_minus|)^{1/2}`.
/// `X` is formed from fused adjugate products and `Y` from the determinant
/// ratio, never from individually solved entries of `B`, because those
/// entries grow like `k^2/omega^2` while `X` and `det B` stay O(1).
pub fn rho_general(
    k: f64,
    omega: f64,
    medium: &ElasticMedium,
    delta: f64,
    s2hat: &TransmissionSymbol,
) -> Result<RhoResult> {
    check_k_omega(k, omega)?;
    if k == 0.0 {
        return Err(Error::Domain("rho_general requires k > 0".into()));
    }
    if !(delta >= 0.0) {
        return Err(Error::Domain(format!("overlap must be >= 0, got {delta}")));
    }
    if !s2hat.is_finite() {
        return Err(Error::Usage("transmission symbol has non-finite entries".into()));
    }
    let roots = mode_roots(k, omega, medium);
    let (b2, b1) = interface_matrices(&roots, medium, s2hat);
    let det_b2 = det2x2(&b2);
    if det_b2.norm() < 1e-12 * frob2(&b2) {
        return Err(Error::SingularPoint { k, reason: "interface matrix B2 is singular".into() });
    }
    let det_b1 = det2x2(&b1);
    // Adjugate products: a11 = det(B2) * (B2^{-1} B1)_{11}, same for a22.
    let a11 = b2[1][1] * b1[0][0] - b2[0][1] * b1[1][0];
    let a22 = b2[0][0] * b1[1][1] - b2[1][0] * b1[0][1];
    let e1 = (-delta * roots.lambda1).exp();
    let e2 = (-delta * roots.lambda2).exp();
    let x = (e1 * a11 - e2 * a22) / det_b2;
    let y = e1 * e2 * det_b1 / det_b2;
    let (r_plus, r_minus) = two_step_eigenvalues(x, y);
    Ok(RhoResult {
        k,
        r_plus,
        r_minus,
        rho: r_plus.norm().max(r_minus.norm()).sqrt(),
        exponent: 0.5,
    })
}

/// Closed-form convergence factor for the zeroth-order Taylor conditions.
///
/// Evaluates the explicit `B` matrix entries
/// `b11 = (-Z1 - Z2 - i w^3 (l1 - l2 cp/cs))/D`,
/// `b12 = i l2 K/D`, `b21 = -i l1 K/D`,
/// `b22 = (-Z1 - Z2 + i w^3 (l1 - l2 cp/cs))/D` with
/// `Z1 = cs^3 q^2 + w^2 cp k^2`, `Z2 = (4 cs^3 k^2 + cp w^2) l1 l2`,
/// `K = 2 k (cp w^2 + 2 cs^3 q)`, `q = k^2 + l1^2`,
/// `D = Z2 - Z1 + i w^3 (l1 + l2 cp/cs)`, then the same overlap-weighted
/// eigenvalues as [`rho_general`]. Redundant with
/// `rho_general(taylor_symbols(0))` and kept as a cross-check; the two agree
/// to better than 1e-12 at every nonsingular wavenumber.
///
/// Two identities keep the evaluation exact at large `k`:
/// `Z2 - Z1 = -cs^3 ((k^2-l1 l2)^2 + l1 (l1-l2)(2 k^2+l1^2+l1 l2)) - cp w^2 (k^2-l1 l2)`
/// and `det B = ((Z2-Z1)^2 + w^6 (l1 + l2 cp/cs)^2)/D^2`; for real roots the
/// latter is `conj(D)/D`, which is why the non-overlapping method stagnates.
pub fn rho_taylor_closed(
    k: f64,
    omega: f64,
    medium: &ElasticMedium,
    delta: f64,
) -> Result<RhoResult> {
    check_k_omega(k, omega)?;
    if k == 0.0 {
        return Err(Error::Domain("rho_taylor_closed requires k > 0".into()));
    }
    if !(delta >= 0.0) {
        return Err(Error::Domain(format!("overlap must be >= 0, got {delta}")));
    }
    let roots = mode_roots(k, omega, medium);
    let (l1, l2) = (roots.lambda1, roots.lambda2);
    let (w, cp, cs) = (omega, medium.cp, medium.cs);
    let w3 = w * w * w;
    let q = k * k + l1 * l1;
    let z1 = cs.powi(3) * q * q + w * w * cp * k * k;
    let z2 = (4.0 * cs.powi(3) * k * k + cp * w * w) * l1 * l2;
    if let Some(cut) = at_cutoff(k, omega, medium) {
        // Stagnation limits: one eigenvalue is exactly 1, the other is the
        // square of an overlap-damped unimodular B entry.
        let (r_plus, r_minus) = match cut {
            Cutoff::Shear => {
                let b22 = (-z1 - Complex64::i() * w3 * l2 * cp / cs)
                    / (-z1 + Complex64::i() * w3 * l2 * cp / cs);
                let e2 = (-delta * l2).exp();
                (Complex64::new(1.0, 0.0), (e2 * b22) * (e2 * b22))
            }
            Cutoff::Pressure => {
                let b11 = (-z1 - Complex64::i() * w3 * l1) / (-z1 + Complex64::i() * w3 * l1);
                let e1 = (-delta * l1).exp();
                (Complex64::new(1.0, 0.0), (e1 * b11) * (e1 * b11))
            }
        };
        return Ok(RhoResult { k, r_plus, r_minus, rho: 1.0, exponent: 0.5 });
    }
    let kml = k2_minus_l1l2(&roots, medium);
    let lml = l1_minus_l2(&roots, medium);
    let z2_minus_z1 =
        -cs.powi(3) * (kml * kml + l1 * lml * (2.0 * k * k + l1 * l1 + l1 * l2))
            - cp * w * w * kml;
    let sigma = l1 + l2 * cp / cs;
    let lam = l1 - l2 * cp / cs;
    let d = z2_minus_z1 + Complex64::i() * w3 * sigma;
    let scale = z1.norm() + z2.norm() + (w3 * sigma).norm();
    if d.norm() < 1e-12 * scale {
        return Err(Error::SingularPoint { k, reason: "closed-form denominator D vanishes".into() });
    }
    let n11 = -(z1 + z2) - Complex64::i() * w3 * lam;
    let n22 = -(z1 + z2) + Complex64::i() * w3 * lam;
    let e1 = (-delta * l1).exp();
    let e2 = (-delta * l2).exp();
    let x = (e1 * n11 - e2 * n22) / d;
    let det_b = (z2_minus_z1 * z2_minus_z1 + w3 * w3 * sigma * sigma) / (d * d);
    let y = e1 * e2 * det_b;
    let (r_plus, r_minus) = two_step_eigenvalues(x, y);
    Ok(RhoResult {
        k,
        r_plus,
        r_minus,
        rho: r_plus.norm().max(r_minus.norm()).sqrt(),
        exponent: 0.5,
    })
}

/// The positive root `alpha` of the threshold equation
/// `alpha cp^2 (cp cosh(alpha) + cs) = (cp^3 + 3 cp^2 cs - 4 cs^3) sinh(alpha)`,
/// located by geometric bracket growth from `[1e-6, 1]` and bisection to
/// 1e-12. The right side's constant factors as `(cp + 2 cs)^2 (cp - cs)`, so
/// the equation has a positive root exactly when `cp^2 > 2 cs^2` (the medium
/// invariant): the residual is negative near 0 and eventually positive.
pub fn delta_star_alpha(medium: &ElasticMedium) -> Result<f64> {
    let (cp, cs) = (medium.cp, medium.cs);
    if !(cp * cp > 2.0 * cs * cs) {
        return Err(Error::Domain(format!(
            "delta_star requires cp^2 > 2 cs^2, got cp = {cp}, cs = {cs}"
        )));
    }
    let g = |a: f64| -> f64 {
        a * cp * cp * (cp * a.cosh() + cs)
            - (cp * cp * cp + 3.0 * cp * cp * cs - 4.0 * cs * cs * cs) * a.sinh()
    };
    let mut lo = 1e-6;
    let mut hi = 1.0;
    if g(lo) >= 0.0 {
        // The root sits below the initial bracket; shrink toward zero.
        while g(lo) >= 0.0 {
            hi = lo;
            lo /= 2.0;
            if lo < 1e-300 {
                return Err(Error::RootNotFound("threshold equation has no positive root".into()));
            }
        }
    } else {
        while g(hi) < 0.0 {
            lo = hi;
            hi *= 2.0;
            if hi > 1e3 {
                return Err(Error::RootNotFound(
                    "no sign change below alpha = 1e3 in the threshold equation".into(),
                ));
            }
        }
    }
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The critical overlap width `delta*` above which the zeroth-order Taylor
/// method converges for every mode except the two cutoff wavenumbers:
///
/// `delta* = cs sqrt(cp^2 - cs^2) (cp + 2 cs)^2 / (cp omega (cs + cp))
///           * sinh(alpha) / (cp cosh(alpha) + cs)`
///
/// with `alpha` from [`delta_star_alpha`]. Scales exactly as `1/omega`.
pub fn delta_star(medium: &ElasticMedium, omega: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::Domain(format!("frequency must be positive, got {omega}")));
    }
    let alpha = delta_star_alpha(medium)?;
    let (cp, cs) = (medium.cp, medium.cs);
    let prefactor = cs * (cp * cp - cs * cs).sqrt() * (cp + 2.0 * cs) * (cp + 2.0 * cs)
        / (cp * omega * (cs + cp));
    Ok(prefactor * alpha.sinh() / (cp * alpha.cosh() + cs))
}

/// Upper endpoint `k*` of the divergence interval `(omega/cs, k*)` of the
/// zeroth-order Taylor method at overlap `delta`, or `None` when no mode
/// diverges (overlap at or above `delta*`).
///
/// Scans `(omega/cs, 5 omega/cs]` with 2000 grid intervals, takes the
/// `rho > 1` bump's argmax, then bisects the first downward crossing of 1 to
/// a width of 1e-8. If the bump has not come back below 1 by the end of the
/// scan, the grid is extended geometrically (the crossing exists for every
/// positive overlap since `rho -> 0` as `k -> infinity`).
pub fn find_kstar(medium: &ElasticMedium, omega: f64, delta: f64) -> Result<Option<f64>> {
    check_k_omega(1.0, omega)?;
    if !(delta > 0.0) {
        return Err(Error::Domain(format!("find_kstar requires delta > 0, got {delta}")));
    }
    let rho_at = |k: f64| -> Result<f64> {
        let (_, s2) = taylor_symbols(0, k, omega, medium)?;
        Ok(rho_general(k, omega, medium, delta, &s2)?.rho)
    };
    let k_lo = omega / medium.cs;
    let mut k_hi = 5.0 * omega / medium.cs;
    let n = 2000usize;
    let step = (k_hi - k_lo) / n as f64;
    let mut ks: Vec<f64> = (1..=n).map(|i| k_lo + step * i as f64).collect();
    let mut vals = ks.iter().map(|&k| rho_at(k)).collect::<Result<Vec<_>>>()?;
    let mut imax = 0;
    for (i, v) in vals.iter().enumerate() {
        if *v > vals[imax] {
            imax = i;
        }
    }
    if vals[imax] <= 1.0 {
        return Ok(None);
    }
    // Walk right from the peak until rho drops back through 1, extending the
    // grid if the crossing lies beyond it.
    let mut j = imax;
    loop {
        while j + 1 < ks.len() && vals[j + 1] > 1.0 {
            j += 1;
        }
        if j + 1 < ks.len() {
            break;
        }
        if k_hi > 1e3 * omega / medium.cs {
            return Err(Error::RootNotFound("divergence interval endpoint beyond scan limit".into()));
        }
        let ext_lo = k_hi;
        k_hi *= 2.0;
        let ext_step = (k_hi - ext_lo) / n as f64;
        for i in 1..=n {
            let k = ext_lo + ext_step * i as f64;
            ks.push(k);
            vals.push(rho_at(k)?);
        }
    }
    let (mut a, mut b) = (ks[j], ks[j + 1]);
    while b - a > 1e-8 {
        let mid = 0.5 * (a + b);
        if rho_at(mid)? > 1.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(Some(0.5 * (a + b)))
}
