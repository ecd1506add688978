//! FTP3 packet arrivals: independent Poisson processes per UE with a fixed
//! payload size.

use rand_distr::{Distribution, Exp};

use crate::config::{ScenarioConfig, TrafficMode};
use crate::seed::{SeedPolicy, StreamRng};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arrival {
    pub ue: usize,
    /// Arrival at the serving cell's PDCP layer, seconds.
    pub time: f64,
    pub bytes: u32,
}

/// Lazily generated arrivals of one UE.
///
/// Inter-arrival times are unit exponentials divided by the rate, so two
/// sources on the same stream but different rates produce time-scaled copies
/// of each other. The capacity search relies on this for common random numbers.
#[derive(Debug, Clone)]
pub struct PoissonSource {
    ue: usize,
    bytes: u32,
    exp: Option<Exp<f64>>,
    rng: StreamRng,
    next: f64,
}

impl PoissonSource {
    pub fn new(ue: usize, rate_pps: f64, bytes: u32, seeds: &SeedPolicy) -> Self {
        let mut rng = seeds.rng(&format!("traffic/{ue}"));
        let exp = (rate_pps > 0.0).then(|| Exp::new(rate_pps).expect("positive rate"));
        let next = exp.map_or(f64::INFINITY, |e| e.sample(&mut rng));
        Self {
            ue,
            bytes,
            exp,
            rng,
            next,
        }
    }

    /// Time of the next arrival, `inf` when the source is silent.
    pub fn peek(&self) -> f64 {
        self.next
    }

    pub fn pop(&mut self) -> Arrival {
        let a = Arrival {
            ue: self.ue,
            time: self.next,
            bytes: self.bytes,
        };
        if let Some(e) = self.exp {
            self.next += e.sample(&mut self.rng);
        }
        a
    }
}

/// One source per UE. Best-effort scenarios get none: their buffers are
/// permanently full.
pub fn sources(cfg: &ScenarioConfig, seeds: &SeedPolicy) -> Vec<PoissonSource> {
    match cfg.traffic_mode {
        TrafficMode::BestEffort => Vec::new(),
        TrafficMode::UrllcFtp3 => (0..cfg.total_ues())
            .map(|ue| PoissonSource::new(ue, cfg.arrival_rate_pps, cfg.payload_bytes, seeds))
            .collect(),
    }
}

/// All arrivals before `horizon_s`, ordered by time.
pub fn generate_traffic(cfg: &ScenarioConfig, seeds: &SeedPolicy, horizon_s: f64) -> Vec<Arrival> {
    let mut out = Vec::new();
    for mut src in sources(cfg, seeds) {
        while src.peek() < horizon_s {
            out.push(src.pop());
        }
    }
    out.sort_by(|a, b| a.time.total_cmp(&b.time).then(a.ue.cmp(&b.ue)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::load_scenario;

    fn one_ue(rate: f64) -> ScenarioConfig {
        load_scenario(&format!("num_cells = 1\nues_per_cell = 1\narrival_rate_pps = {rate}")).unwrap()
    }

    #[test]
    fn packet_count_within_three_sigma() {
        let n = generate_traffic(&one_ue(100.0), &SeedPolicy::new(5, 0), 100.0).len();
        assert!((n as f64 - 10_000.0).abs() <= 300.0, "{n}");
    }

    #[test]
    fn inter_arrivals_pass_exponential_ks_test() {
        let rate = 100.0;
        let mut src = PoissonSource::new(0, rate, 50, &SeedPolicy::new(9, 0));
        let mut prev = 0.0;
        let mut gaps: Vec<f64> = (0..100_000)
            .map(|_| {
                let t = src.pop().time;
                let g = t - prev;
                prev = t;
                g
            })
            .collect();
        gaps.sort_by(f64::total_cmp);
        let n = gaps.len() as f64;
        let d = gaps
            .iter()
            .enumerate()
            .map(|(i, &g)| {
                let f = 1.0 - (-rate * g).exp();
                (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
            })
            .fold(0.0, f64::max);
        // critical value at alpha = 0.01
        assert!(d < 1.628 / n.sqrt(), "D = {d}");
    }

    #[test]
    fn best_effort_has_no_arrival_process() {
        let cfg = load_scenario("traffic_mode = best_effort").unwrap();
        assert!(sources(&cfg, &SeedPolicy::new(1, 0)).is_empty());
    }

    #[test]
    fn rates_share_one_random_stream() {
        let seeds = SeedPolicy::new(3, 0);
        let mut slow = PoissonSource::new(0, 50.0, 50, &seeds);
        let mut fast = PoissonSource::new(0, 200.0, 50, &seeds);
        for _ in 0..100 {
            let (a, b) = (slow.pop().time, fast.pop().time);
            assert!((a - 4.0 * b).abs() < 1e-9 * a.max(1.0));
        }
    }

    #[test]
    fn zero_rate_is_silent() {
        assert!(generate_traffic(&one_ue(0.0), &SeedPolicy::new(1, 0), 10.0).is_empty());
    }
}
