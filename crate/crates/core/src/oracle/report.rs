use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::full::{build_full_hamiltonian, free_ring_spectrum};
use super::quadrature::integrate;
use super::relative::{build_relative_hamiltonian, classify_spectrum};
use crate::dimer::{dimer_alpha, dimer_energy, dimer_wavefunction};
use crate::error::Result;
use crate::model::{collective_hopping, LatticeParams, QuasiMomentum};
use crate::scattering::density_of_states;
use crate::sweep::{self, Execution};

/// Pass/fail thresholds. Energies are in units of `J`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Bound-state energy error for `|U| >= 2J`.
    pub bound_energy: f64,
    /// Bound-state energy error for shallow binding, `|U| < 2J`.
    pub shallow_bound_energy: f64,
    /// Allowed `1 - overlap` between numeric and closed-form dimer vectors.
    pub overlap: f64,
    /// Norm of the odd part of the bound eigenvector, and off-site weight of
    /// the zone-edge state.
    pub parity: f64,
    /// Per-bin relative error of the band histogram.
    pub dos_bin: f64,
    /// Floating-point floor added to ring finite-size tolerances, in units of `max(|U|, J)`.
    pub ring_floor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            bound_energy: 1e-8,
            shallow_bound_energy: 1e-6,
            overlap: 1e-8,
            parity: 1e-10,
            dos_bin: 0.05,
            ring_floor: 1e-10,
        }
    }
}

/// Interactions weaker than this multiple of `J` count as shallow binding.
pub const SHALLOW_BINDING: f64 = 2.0;

/// Minimum relative half-width used for shallow dimers.
pub const SHALLOW_HALF_WIDTH: usize = 1600;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterPoint {
    pub j: f64,
    pub u: f64,
    pub d: f64,
    /// Center-of-mass phase `K d` for relative-chain reports.
    pub k: Option<f64>,
    pub half_width: Option<usize>,
    pub ring_sites: Option<usize>,
}

impl std::fmt::Display for ParameterPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "J={} U={} d={}", self.j, self.u, self.d)?;
        if let Some(k) = self.k {
            write!(f, " Kd={k:.6}")?;
        }
        if let Some(n) = self.half_width {
            write!(f, " N={n}")?;
        }
        if let Some(m) = self.ring_sites {
            write!(f, " M={m}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub label: String,
    pub analytic: f64,
    pub numeric: f64,
    pub abs_error: f64,
    pub tolerance: f64,
}

impl Discrepancy {
    fn new(label: impl Into<String>, analytic: f64, numeric: f64, tolerance: f64) -> Self {
        Self {
            label: label.into(),
            analytic,
            numeric,
            abs_error: (analytic - numeric).abs(),
            tolerance,
        }
    }

    pub fn passes(&self) -> bool {
        self.abs_error <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Overlap {
    pub label: String,
    pub overlap: f64,
    pub minimum: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub lower: f64,
    pub upper: f64,
    pub analytic_fraction: f64,
    pub numeric_fraction: f64,
    pub relative_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandHistogram {
    pub bins: Vec<HistogramBin>,
    pub tolerance: f64,
}

impl BandHistogram {
    pub fn passes(&self) -> bool {
        self.bins.iter().all(|b| b.relative_error <= self.tolerance)
    }
}

/// Closed-form versus numerical comparison at one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub parameter_point: ParameterPoint,
    pub eigenvalue_discrepancies: Vec<Discrepancy>,
    pub wavefunction_overlaps: Vec<Overlap>,
    pub band_histogram: Option<BandHistogram>,
    /// One path found a bound state and the other did not.
    pub presence_mismatch: bool,
    pub notes: Vec<String>,
    pub pass: bool,
}

impl OracleReport {
    fn new(parameter_point: ParameterPoint) -> Self {
        Self {
            parameter_point,
            eigenvalue_discrepancies: Vec::new(),
            wavefunction_overlaps: Vec::new(),
            band_histogram: None,
            presence_mismatch: false,
            notes: Vec::new(),
            pass: false,
        }
    }

    /// Pass verdict recomputed from the recorded errors and tolerances.
    pub fn evaluate(&self) -> bool {
        !self.presence_mismatch
            && self.eigenvalue_discrepancies.iter().all(Discrepancy::passes)
            && self.wavefunction_overlaps.iter().all(|o| o.overlap >= o.minimum)
            && self.band_histogram.as_ref().is_none_or(BandHistogram::passes)
    }

    fn finish(mut self) -> Self {
        self.pass = self.evaluate();
        self
    }

    /// First failing item, for diagnostics.
    pub fn first_failure(&self) -> Option<String> {
        if self.presence_mismatch {
            return Some("bound state found on only one path".into());
        }
        if let Some(d) = self.eigenvalue_discrepancies.iter().find(|d| !d.passes()) {
            return Some(format!("{}: |{} - {}| = {:e} > {:e}", d.label, d.analytic, d.numeric, d.abs_error, d.tolerance));
        }
        if let Some(o) = self.wavefunction_overlaps.iter().find(|o| o.overlap < o.minimum) {
            return Some(format!("{}: overlap {} < {}", o.label, o.overlap, o.minimum));
        }
        if let Some(h) = &self.band_histogram {
            if let Some(b) = h.bins.iter().find(|b| b.relative_error > h.tolerance) {
                return Some(format!(
                    "DOS bin [{}, {}]: relative error {} > {}",
                    b.lower, b.upper, b.relative_error, h.tolerance
                ));
            }
        }
        None
    }
}

/// Compares the relative-chain eigenproblem at `(K, N)` with the closed forms.
/// With `histogram_bins = Some(b)` the band eigenvalues are also binned against
/// the density of states.
pub fn compare_relative(
    k: QuasiMomentum,
    params: &LatticeParams,
    half_width: usize,
    tolerances: &Tolerances,
    histogram_bins: Option<usize>,
) -> Result<OracleReport> {
    let mut report = OracleReport::new(ParameterPoint {
        j: params.j,
        u: params.u,
        d: params.d,
        k: Some(k.phase()),
        half_width: Some(half_width),
        ring_sites: None,
    });
    let h = build_relative_hamiltonian(k, params, half_width)?;
    let values = h.eigenvalues()?;
    let classes = classify_spectrum(&values, k, params);

    let (lo, hi) = h.gershgorin_bounds(params);
    let outside = values.iter().filter(|&&e| e < lo - 1e-12 * hi.max(1.0) || e > hi + 1e-12 * hi.max(1.0)).count();
    report.eigenvalue_discrepancies.push(Discrepancy::new(
        "eigenvalues outside Gershgorin interval",
        0.0,
        outside as f64,
        0.0,
    ));

    match (params.u != 0.0, classes.bound) {
        (false, None) => report.notes.push("no bound state (both paths)".into()),
        (true, None) => {
            report.presence_mismatch = true;
            report.notes.push("closed form predicts a dimer, numeric spectrum has no isolated level".into());
        }
        (false, Some(idx)) => {
            report.presence_mismatch = true;
            report.notes.push(format!("numeric spectrum has an isolated level {} at U = 0", values[idx]));
        }
        (true, Some(idx)) => {
            let numeric = values[idx];
            let analytic = dimer_energy(k, params)?;
            let tol = if params.u.abs() < SHALLOW_BINDING * params.j {
                tolerances.shallow_bound_energy
            } else {
                tolerances.bound_energy
            };
            report
                .eigenvalue_discrepancies
                .push(Discrepancy::new("bound energy", analytic, numeric, tol * params.j));

            let vector = h.eigenvector(numeric);
            let n = half_width as i64;
            let closed = dimer_wavefunction(k, params, Some(-n..=n))?;
            let dot: f64 = closed.amplitudes().zip(&vector).map(|(a, b)| a * b).sum();
            let overlap = (dot / closed.sum_of_squares().sqrt()).clamp(0.0, 1.0);
            report.wavefunction_overlaps.push(Overlap {
                label: "bound eigenvector".into(),
                overlap,
                minimum: 1.0 - tolerances.overlap,
            });
            report.eigenvalue_discrepancies.push(Discrepancy::new(
                "bound eigenvector odd part",
                0.0,
                h.odd_part_norm(&vector),
                tolerances.parity,
            ));
            if k.is_zone_edge() {
                let off_site = vector
                    .iter()
                    .enumerate()
                    .filter(|&(r, _)| r != half_width)
                    .map(|(_, v)| v.abs())
                    .fold(0.0, f64::max);
                report.eigenvalue_discrepancies.push(Discrepancy::new(
                    "zone-edge off-site amplitude",
                    0.0,
                    off_site,
                    tolerances.parity.min(1e-12),
                ));
            }
        }
    }

    if let Some(bins) = histogram_bins {
        if collective_hopping(k, params) > 0.0 && bins > 0 {
            let band: Vec<f64> = classes.band.iter().map(|&i| values[i]).collect();
            report.band_histogram = Some(dos_histogram(&band, k, params, bins, tolerances.dos_bin)?);
        }
    }
    Ok(report.finish())
}

/// Fraction of the window `|E| <= 0.9 * 2 J_K` used for histogram bins.
const HISTOGRAM_WINDOW: f64 = 0.9;

/// Bins `band_eigenvalues` over the interior of the band and compares the
/// fraction in each bin with the integral of the density of states.
pub fn dos_histogram(
    band_eigenvalues: &[f64],
    k: QuasiMomentum,
    params: &LatticeParams,
    bins: usize,
    tolerance: f64,
) -> Result<BandHistogram> {
    let half = 2.0 * collective_hopping(k, params);
    let lo = -HISTOGRAM_WINDOW * half;
    let width = 2.0 * HISTOGRAM_WINDOW * half / bins as f64;
    // with L = 1 the band integral is 1 / (2 d)
    let total = 1.0 / (2.0 * params.d);
    let count = band_eigenvalues.len() as f64;
    let bins = (0..bins)
        .map(|b| {
            let lower = lo + width * b as f64;
            let upper = lower + width;
            let (content, _) = integrate(
                |e| density_of_states(e, k, 1.0, params).unwrap_or(f64::NAN),
                lower,
                upper,
                1e-12,
                0.0,
            )?;
            let analytic_fraction = content / total;
            let inside = band_eigenvalues.iter().filter(|&&e| e >= lower && e < upper).count();
            let numeric_fraction = inside as f64 / count;
            Ok(HistogramBin {
                lower,
                upper,
                analytic_fraction,
                numeric_fraction,
                relative_error: (numeric_fraction - analytic_fraction).abs() / analytic_fraction,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BandHistogram { bins, tolerance })
}

/// Compares the ring-momentum blocks of the full two-boson ring with the
/// closed-form dimer dispersion (or, at `U = 0`, the full spectrum with the
/// enumerated free-pair energies).
pub fn compare_ring(params: &LatticeParams, sites: usize, tolerances: &Tolerances) -> Result<OracleReport> {
    let mut report = OracleReport::new(ParameterPoint {
        j: params.j,
        u: params.u,
        d: params.d,
        k: None,
        half_width: None,
        ring_sites: Some(sites),
    });
    let h = build_full_hamiltonian(params, sites)?;
    let scale = params.u.abs().max(params.j);
    report.eigenvalue_discrepancies.push(Discrepancy::new(
        "translation commutator",
        0.0,
        h.translation_commutator_norm(),
        1e-12 * scale,
    ));

    if params.u == 0.0 {
        let numeric = h.spectrum()?;
        let free = free_ring_spectrum(params, sites);
        let worst = numeric.iter().zip(&free).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        report
            .eigenvalue_discrepancies
            .push(Discrepancy::new("free two-boson spectrum", 0.0, worst, 1e-10 * params.j));
        report.notes.push("no bound state (both paths)".into());
        return Ok(report.finish());
    }

    let blocks = h.momentum_blocks()?;
    let total: usize = blocks.iter().map(|b| b.eigenvalues.len()).sum();
    report
        .eigenvalue_discrepancies
        .push(Discrepancy::new("block dimensions sum", h.dim() as f64, total as f64, 0.0));
    for block in blocks {
        let numeric = if params.u < 0.0 {
            block.eigenvalues.first()
        } else {
            block.eigenvalues.last()
        };
        let Some(&numeric) = numeric else { continue };
        let analytic = dimer_energy(block.k, params)?;
        let alpha = if block.k.is_zone_edge() { 0.0 } else { dimer_alpha(block.k, params)?.abs() };
        let finite_size = 2.0 * alpha.powf(sites as f64 / 2.0) * params.j;
        report.eigenvalue_discrepancies.push(Discrepancy::new(
            format!("ring bound energy n={} Kd={:.6}", block.index, block.k.phase()),
            analytic,
            numeric,
            finite_size + tolerances.ring_floor * scale,
        ));
    }
    Ok(report.finish())
}

/// Parameter matrix for a full validation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationPlan {
    pub j: f64,
    pub d: f64,
    pub interactions: Vec<f64>,
    /// Ring size `M`; its quantized momenta are added to the relative-chain points.
    pub ring_sites: usize,
    /// Relative half-width `N` for `|U| >= 2J`.
    pub half_width: usize,
    pub histogram_half_width: usize,
    pub histogram_bins: usize,
    pub tolerances: Tolerances,
}

impl Default for ValidationPlan {
    fn default() -> Self {
        Self {
            j: 1.0,
            d: 1.0,
            interactions: vec![0.0, -0.5, 0.5, -2.0, 2.0, -5.0, 5.0, -20.0, 20.0],
            ring_sites: 24,
            half_width: 200,
            histogram_half_width: 400,
            histogram_bins: 10,
            tolerances: Tolerances::default(),
        }
    }
}

enum Job {
    Relative { u: f64, k: QuasiMomentum, half_width: usize, bins: Option<usize> },
    Ring { u: f64 },
}

impl ValidationPlan {
    /// `{0, pi/2}` followed by the ring's quantized momenta.
    pub fn momenta(&self) -> Result<Vec<QuasiMomentum>> {
        let mut out = vec![QuasiMomentum::ZERO, QuasiMomentum::from_phase(PI / 2.0)?];
        for n in 0..self.ring_sites {
            out.push(QuasiMomentum::from_phase(2.0 * PI * n as f64 / self.ring_sites as f64)?);
        }
        Ok(out)
    }

    fn jobs(&self) -> Result<Vec<Job>> {
        let momenta = self.momenta()?;
        let mut jobs = Vec::new();
        for &u in &self.interactions {
            let half_width = if u != 0.0 && u.abs() < SHALLOW_BINDING * self.j {
                self.half_width.max(SHALLOW_HALF_WIDTH)
            } else {
                self.half_width
            };
            for &k in &momenta {
                jobs.push(Job::Relative { u, k, half_width, bins: None });
            }
            jobs.push(Job::Relative {
                u,
                k: QuasiMomentum::ZERO,
                half_width: self.histogram_half_width,
                bins: Some(self.histogram_bins),
            });
            jobs.push(Job::Ring { u });
        }
        Ok(jobs)
    }
}

/// Runs every comparison in `plan`, in parallel when `exec` allows.
pub fn run_validation(plan: &ValidationPlan, exec: Execution) -> Result<Vec<OracleReport>> {
    let jobs = plan.jobs()?;
    sweep::try_map(exec, &jobs, |job| match *job {
        Job::Relative { u, k, half_width, bins } => {
            let p = LatticeParams::with_units(plan.j, u, plan.d, 1.0)?;
            compare_relative(k, &p, half_width, &plan.tolerances, bins)
        }
        Job::Ring { u } => {
            let p = LatticeParams::with_units(plan.j, u, plan.d, 1.0)?;
            compare_ring(&p, plan.ring_sites, &plan.tolerances)
        }
    })
}
