//! Small-scale fading and per-PRB SINR.
//!
//! Each (cell, UE, frequency block) link carries an independent Rayleigh
//! process built as a sum of sinusoids with random arrival angles and phases.
//! The process is a deterministic function of time once seeded, so it can be
//! evaluated at any TTI in any order, and every run of a scenario sees the
//! same channel realisation regardless of the offered load.
//!
//! Engines read the channel through [`LinkState::fading`], which samples each
//! process on a grid far finer than the coherence time and interpolates the
//! complex amplitude in between.

use std::cell::RefCell;
use std::f64::consts::PI;

use rand::Rng;

use crate::config::{db_to_lin, ScenarioConfig};
use crate::deployment::Topology;
use crate::seed::SeedPolicy;

const SPEED_OF_LIGHT: f64 = 299_792_458.0;
const MIN_FADING_GAIN: f64 = 1e-12;
/// Amplitude grid points per Doppler period (about 0.1 rad of phase each).
const GRID_PER_DOPPLER_PERIOD: f64 = 64.0;
const CACHE_SLOTS: usize = 4;

/// `(sin, cos)` of `2 pi x`, accurate to about 1e-10.
///
/// Working in cycles makes range reduction exact, which keeps long horizons
/// as cheap and as precise as the first second. Straight-line arithmetic
/// lets the compiler vectorise the sum over sinusoids.
#[inline(always)]
fn sincos_cycles(x: f64) -> (f64, f64) {
    // adding and removing 1.5 * 2^52 rounds to the nearest integer
    const ROUND: f64 = 6_755_399_441_055_744.0;
    let r = x - ((x + ROUND) - ROUND);
    // half angle in [-pi/2, pi/2], then double it
    let h = r * PI;
    let h2 = h * h;
    // Taylor series in Horner form, through h^15 and h^16
    const SIN: [f64; 7] = [1.0 / 6.0, 1.0 / 20.0, 1.0 / 42.0, 1.0 / 72.0, 1.0 / 110.0, 1.0 / 156.0, 1.0 / 210.0];
    const COS: [f64; 8] = [
        1.0 / 2.0,
        1.0 / 12.0,
        1.0 / 30.0,
        1.0 / 56.0,
        1.0 / 90.0,
        1.0 / 132.0,
        1.0 / 182.0,
        1.0 / 240.0,
    ];
    let s = SIN.iter().rev().fold(1.0, |acc, k| 1.0 - h2 * k * acc);
    let c = COS.iter().rev().fold(1.0, |acc, k| 1.0 - h2 * k * acc);
    let s = h * s;
    (2.0 * s * c, c * c - s * s)
}

/// Rayleigh fading power gain with unit mean and a Jakes-like Doppler spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct FadingProcess {
    /// Doppler frequency of each sinusoid, Hz.
    freqs: Vec<f64>,
    /// Initial phase of each sinusoid, cycles.
    phases: Vec<f64>,
}

impl FadingProcess {
    pub fn new<R: Rng>(doppler_hz: f64, sinusoids: usize, rng: &mut R) -> Self {
        let (freqs, phases) = (0..sinusoids.max(1))
            .map(|_| {
                let angle: f64 = rng.random_range(0.0..2.0 * PI);
                let phase: f64 = rng.random_range(0.0..2.0 * PI);
                (doppler_hz * angle.cos(), phase / (2.0 * PI))
            })
            .unzip();
        Self { freqs, phases }
    }

    /// Complex amplitude at `t`, normalised so its power has unit mean.
    pub fn amplitude(&self, t: f64) -> (f64, f64) {
        let (mut re, mut im) = (0.0, 0.0);
        for (&f, &phi) in self.freqs.iter().zip(&self.phases) {
            let (s, c) = sincos_cycles(f * t + phi);
            re += c;
            im += s;
        }
        let norm = (self.freqs.len() as f64).sqrt();
        (re / norm, im / norm)
    }

    pub fn power_gain(&self, t: f64) -> f64 {
        let (re, im) = self.amplitude(t);
        (re * re + im * im).max(MIN_FADING_GAIN)
    }
}

/// Direct-mapped memo of grid amplitudes for one process.
#[derive(Debug, Clone, Copy)]
struct GridCache {
    slots: [(u64, (f64, f64)); CACHE_SLOTS],
}

impl GridCache {
    const EMPTY: Self = Self {
        slots: [(u64::MAX, (0.0, 0.0)); CACHE_SLOTS],
    };
}

/// Per-link fading state for a whole deployment.
#[derive(Debug, Clone)]
pub struct LinkState {
    n_ues: usize,
    blocks: usize,
    block_prbs: usize,
    /// `None` when fading is disabled: every gain is exactly 1.
    processes: Option<Vec<FadingProcess>>,
    /// Seconds between amplitude grid points; infinite without Doppler.
    grid_s: f64,
    cache: RefCell<Vec<GridCache>>,
}

pub fn doppler_hz(cfg: &ScenarioConfig) -> f64 {
    cfg.ue_speed_kmh / 3.6 * cfg.carrier_freq_hz / SPEED_OF_LIGHT
}

/// Grid spacing: a whole number of CQI periods, so every report lands on a
/// grid point, and no coarser than the Doppler resolution allows.
fn amplitude_grid_s(cfg: &ScenarioConfig, fd: f64) -> f64 {
    if fd <= 0.0 {
        return f64::INFINITY;
    }
    let fine = 1.0 / (GRID_PER_DOPPLER_PERIOD * fd);
    let period = cfg.cqi_period_tti as f64 * cfg.tti_duration_s();
    if period <= fine {
        period * (fine / period).floor()
    } else {
        fine
    }
}

impl LinkState {
    pub fn new(cfg: &ScenarioConfig, topology: &Topology, seeds: &SeedPolicy) -> Self {
        let block_prbs = if cfg.fading_prb_block == 0 {
            cfg.prb_count
        } else {
            cfg.fading_prb_block
        };
        let blocks = cfg.prb_count.div_ceil(block_prbs);
        let n_ues = topology.num_ues();
        let processes = cfg.fading.then(|| {
            let fd = doppler_hz(cfg);
            let mut out = Vec::with_capacity(topology.num_cells() * n_ues * blocks);
            for cell in 0..topology.num_cells() {
                for ue in 0..n_ues {
                    for block in 0..blocks {
                        let mut rng = seeds.rng(&format!("fading/{cell}/{ue}/{block}"));
                        out.push(FadingProcess::new(fd, cfg.fading_sinusoids, &mut rng));
                    }
                }
            }
            out
        });
        let fd = doppler_hz(cfg);
        let n_proc = processes.as_ref().map_or(0, Vec::len);
        Self {
            n_ues,
            blocks,
            block_prbs,
            processes,
            grid_s: amplitude_grid_s(cfg, fd),
            cache: RefCell::new(vec![GridCache::EMPTY; n_proc]),
        }
    }

    /// A channel without small-scale fading.
    pub fn flat(n_ues: usize) -> Self {
        Self {
            n_ues,
            blocks: 1,
            block_prbs: usize::MAX,
            processes: None,
            grid_s: f64::INFINITY,
            cache: RefCell::new(Vec::new()),
        }
    }

    /// `(first_prb, prb_count)` of each independently faded block.
    pub fn block_layout(&self, prb_count: usize) -> Vec<(usize, usize)> {
        if self.blocks == 1 || self.block_prbs >= prb_count {
            return vec![(0, prb_count)];
        }
        (0..prb_count)
            .step_by(self.block_prbs)
            .map(|first| (first, self.block_prbs.min(prb_count - first)))
            .collect()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks
    }

    pub fn block_of(&self, prb: usize) -> usize {
        (prb / self.block_prbs).min(self.blocks - 1)
    }

    /// Power gain of the link on `prb` at `t`.
    pub fn fading(&self, cell: usize, ue: usize, prb: usize, t: f64) -> f64 {
        let Some(procs) = &self.processes else {
            return 1.0;
        };
        let idx = (cell * self.n_ues + ue) * self.blocks + self.block_of(prb);
        if !self.grid_s.is_finite() {
            return procs[idx].power_gain(0.0);
        }
        let x = (t / self.grid_s).max(0.0);
        // snap rounding noise so on-grid times read a single point
        let nearest = x.round();
        let (k, frac) = if (x - nearest).abs() < 1e-9 { (nearest, 0.0) } else { (x.floor(), x - x.floor()) };
        let mut cache = self.cache.borrow_mut();
        let mut point = |i: u64| {
            let slot = &mut cache[idx].slots[i as usize % CACHE_SLOTS];
            if slot.0 != i {
                *slot = (i, procs[idx].amplitude(i as f64 * self.grid_s));
            }
            slot.1
        };
        let a = point(k as u64);
        if frac == 0.0 {
            return (a.0 * a.0 + a.1 * a.1).max(MIN_FADING_GAIN);
        }
        let b = point(k as u64 + 1);
        let re = a.0 + frac * (b.0 - a.0);
        let im = a.1 + frac * (b.1 - a.1);
        (re * re + im * im).max(MIN_FADING_GAIN)
    }
}

/// Transmit power per PRB of every cell during one TTI; zero where silent.
#[derive(Debug, Clone, PartialEq)]
pub struct TtiActivity {
    prb_count: usize,
    power_mw: Vec<f64>,
}

impl TtiActivity {
    pub fn new(cells: usize, prb_count: usize) -> Self {
        Self {
            prb_count,
            power_mw: vec![0.0; cells * prb_count],
        }
    }

    pub fn clear(&mut self) {
        self.power_mw.iter_mut().for_each(|p| *p = 0.0);
    }

    pub fn set(&mut self, cell: usize, prb: usize, power_mw: f64) {
        self.power_mw[cell * self.prb_count + prb] = power_mw;
    }

    pub fn power(&self, cell: usize, prb: usize) -> f64 {
        self.power_mw[cell * self.prb_count + prb]
    }

    pub fn cells(&self) -> usize {
        self.power_mw.len() / self.prb_count.max(1)
    }

    pub fn is_active(&self, cell: usize, prb: usize) -> bool {
        self.power(cell, prb) > 0.0
    }
}

/// Geometry, fading and receiver constants needed to evaluate SINR.
#[derive(Debug, Clone)]
pub struct RadioEnv {
    pub topology: Topology,
    pub links: LinkState,
    pub noise_mw: f64,
    pub rx_gain: f64,
    pub tx_power_mw: f64,
}

impl RadioEnv {
    pub fn new(cfg: &ScenarioConfig, topology: Topology, seeds: &SeedPolicy) -> Self {
        let links = LinkState::new(cfg, &topology, seeds);
        Self {
            topology,
            links,
            noise_mw: cfg.noise_per_prb_mw(),
            rx_gain: db_to_lin(cfg.rx_gain_db),
            tx_power_mw: db_to_lin(cfg.tx_power_dbm),
        }
    }

    /// Received desired power on one PRB for a given transmit power.
    pub fn signal_mw(&self, ue: usize, cell: usize, prb: usize, t: f64, power_mw: f64) -> f64 {
        power_mw * self.topology.gain(cell, ue) * self.links.fading(cell, ue, prb, t) * self.rx_gain
    }

    /// Interference from every non-serving cell active on `prb`.
    pub fn interference_mw(&self, ue: usize, prb: usize, t: f64, activity: &TtiActivity) -> f64 {
        let serving = self.topology.serving_cell(ue);
        (0..activity.cells())
            .filter(|&c| c != serving && activity.is_active(c, prb))
            .map(|c| activity.power(c, prb) * self.topology.gain(c, ue) * self.links.fading(c, ue, prb, t))
            .sum()
    }

    /// Linear SINR of `ue` on `prb` given the cells transmitting this TTI.
    /// The serving cell's own power on `prb` must be non-zero.
    pub fn sinr_per_prb(&self, ue: usize, prb: usize, t: f64, activity: &TtiActivity) -> f64 {
        let serving = self.topology.serving_cell(ue);
        let s = self.signal_mw(ue, serving, prb, t, activity.power(serving, prb));
        s / (self.noise_mw + self.interference_mw(ue, prb, t, activity))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::load_scenario;
    use crate::deployment::{drop_topology, Position};
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_sincos_matches_std() {
        for i in -5000..5000 {
            let x = i as f64 * 0.013_7 + 1e3;
            let (s, c) = sincos_cycles(x);
            let (es, ec) = (2.0 * PI * x).sin_cos();
            assert!((s - es).abs() < 1e-9 && (c - ec).abs() < 1e-9, "x={x}");
        }
    }

    #[test]
    fn fading_has_unit_mean_and_stays_positive() {
        let seeds = SeedPolicy::new(1, 0);
        let (procs, samples) = (200, 2000);
        let mut total = 0.0;
        for i in 0..procs {
            let p = FadingProcess::new(11.1, 16, &mut seeds.rng(&format!("f{i}")));
            for k in 0..samples {
                let g = p.power_gain(k as f64 * 1e-3);
                assert!(g > 0.0);
                total += g;
            }
        }
        let mean = total / (procs * samples) as f64;
        assert!((mean - 1.0).abs() < 0.05, "average {mean}");
    }

    #[test]
    fn fading_ensemble_is_roughly_exponential() {
        // P(|h|^2 < 0.1) = 1 - e^-0.1 for a unit-mean exponential.
        let hits = (0..4000)
            .filter(|i| {
                let mut rng = SeedPolicy::new(2, 0).rng(&format!("x{i}"));
                FadingProcess::new(10.0, 16, &mut rng).power_gain(0.37) < 0.1
            })
            .count();
        let p = hits as f64 / 4000.0;
        assert!((p - (1.0 - (-0.1f64).exp())).abs() < 0.025, "{p}");
    }

    fn two_cell_env() -> RadioEnv {
        let cells = vec![
            Position { x: 0.0, y: 0.0, z: 10.0 },
            Position { x: 20.0, y: 0.0, z: 10.0 },
        ];
        let ues = vec![(Position { x: 10.0, y: 0.0, z: 1.5 }, 0)];
        // equal gain from both cells, tie resolves to the last max
        let topo = Topology::from_parts((40.0, 20.0), cells, ues, vec![1e-7, 1e-7]);
        RadioEnv {
            topology: topo,
            links: LinkState::flat(1),
            noise_mw: 1e-10,
            rx_gain: 1.0,
            tx_power_mw: 1.0,
        }
    }

    #[test]
    fn interference_free_sinr_is_snr() {
        let env = two_cell_env();
        let serving = env.topology.serving_cell(0);
        let mut act = TtiActivity::new(2, 4);
        act.set(serving, 1, 0.5);
        assert_relative_eq!(env.sinr_per_prb(0, 1, 0.0, &act), 0.5 * 1e-7 / 1e-10);
    }

    #[test]
    fn symmetric_interferer_pushes_sinr_below_one() {
        let env = two_cell_env();
        let serving = env.topology.serving_cell(0);
        let mut act = TtiActivity::new(2, 4);
        act.set(0, 2, 0.5);
        act.set(1, 2, 0.5);
        let s = 0.5 * 1e-7;
        let sinr = env.sinr_per_prb(0, 2, 0.0, &act);
        assert_relative_eq!(sinr, s / (1e-10 + s));
        assert!(sinr < 1.0);
        // an interferer on another PRB does not matter
        let mut other = TtiActivity::new(2, 4);
        other.set(serving, 2, 0.5);
        other.set(1 - serving, 3, 0.5);
        assert_relative_eq!(env.sinr_per_prb(0, 2, 0.0, &other), s / 1e-10);
    }

    #[test]
    fn per_block_fading_is_independent_across_blocks() {
        let cfg = load_scenario("num_cells = 1\nues_per_cell = 1\nfading_prb_block = 10").unwrap();
        let topo = drop_topology(&cfg, &SeedPolicy::new(1, 0));
        let links = LinkState::new(&cfg, &topo, &SeedPolicy::new(1, 0));
        assert_eq!(links.fading(0, 0, 0, 0.3), links.fading(0, 0, 9, 0.3));
        assert_ne!(links.fading(0, 0, 0, 0.3), links.fading(0, 0, 10, 0.3));
        let flat = LinkState::new(
            &load_scenario("num_cells = 1\nues_per_cell = 1\nfading_prb_block = 0").unwrap(),
            &topo,
            &SeedPolicy::new(1, 0),
        );
        assert_eq!(flat.fading(0, 0, 0, 0.3), flat.fading(0, 0, 99, 0.3));
    }

    #[test]
    fn interpolated_fading_tracks_the_exact_process() {
        let cfg = load_scenario("num_cells = 1\nues_per_cell = 1\nfading_prb_block = 50").unwrap();
        let seeds = SeedPolicy::new(3, 0);
        let topo = drop_topology(&cfg, &seeds);
        let links = LinkState::new(&cfg, &topo, &seeds);
        let exact = FadingProcess::new(doppler_hz(&cfg), cfg.fading_sinusoids, &mut seeds.rng("fading/0/0/1"));
        // visit times out of order; the cache must not change the answer
        let times: Vec<f64> = (0..400).map(|i| ((i * 37) % 400) as f64 * 1.43e-4).collect();
        for &t in &times {
            let g = links.fading(0, 0, 60, t);
            let e = exact.power_gain(t);
            assert!((g - e).abs() < 0.01 * (1.0 + e), "t={t} {g} vs {e}");
            assert_eq!(g, links.fading(0, 0, 60, t));
        }
        let (a, b) = (links.fading(0, 0, 60, 0.02), links.fading(0, 0, 60, 5.0));
        assert_eq!(a, links.fading(0, 0, 60, 0.02));
        assert_ne!(a, b);
    }
}
