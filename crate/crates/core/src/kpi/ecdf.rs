use std::io::Write;

/// Exact empirical distribution over `f64` samples (`+inf` allowed).
///
/// Samples are kept in full and sorted lazily; quantiles use the
/// nearest-rank definition so exceedance counts are exact.
#[derive(Debug, Clone, Default)]
pub struct EcdfAccumulator {
    samples: Vec<f64>,
    sorted: bool,
}

/// Order-statistic rank (1-based) of the `q`-quantile among `n` samples.
pub fn nearest_rank(q: f64, n: usize) -> usize {
    // absorb rounding when q * n is mathematically an integer
    ((q * n as f64 - 1e-9).ceil() as usize).clamp(1, n.max(1))
}

impl EcdfAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        debug_assert!(!x.is_nan());
        self.samples.push(x);
        self.sorted = false;
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Combines two accumulators; the result is independent of order.
    pub fn merge(&mut self, other: &EcdfAccumulator) {
        self.samples.extend_from_slice(&other.samples);
        self.sorted = false;
    }

    fn sort(&mut self) {
        if !self.sorted {
            self.samples.sort_by(f64::total_cmp);
            self.sorted = true;
        }
    }

    pub fn sorted_samples(&mut self) -> &[f64] {
        self.sort();
        &self.samples
    }

    /// Nearest-rank quantile: the smallest sample `x` with `F(x) >= q`.
    /// `quantile(0)` is the minimum and `quantile(1)` the maximum.
    pub fn quantile(&mut self, q: f64) -> Option<f64> {
        if self.samples.is_empty() {
            return None;
        }
        self.sort();
        let q = q.clamp(0.0, 1.0);
        Some(self.samples[nearest_rank(q, self.samples.len()) - 1])
    }

    /// Fraction of samples `<= x`.
    pub fn cdf(&mut self, x: f64) -> f64 {
        if self.samples.is_empty() {
            return 0.0;
        }
        self.sort();
        self.samples.partition_point(|&s| s <= x) as f64 / self.samples.len() as f64
    }

    /// `(value, cum_prob)` pairs: `grid` evenly spaced probabilities plus the
    /// exact top `tail` order statistics, sorted by probability.
    pub fn points(&mut self, grid: usize, tail: usize) -> Vec<(f64, f64)> {
        let n = self.samples.len();
        if n == 0 {
            return Vec::new();
        }
        self.sort();
        let mut pts: Vec<(f64, f64)> = (1..=grid)
            .map(|i| {
                let p = i as f64 / grid as f64;
                (self.samples[nearest_rank(p, n) - 1], p)
            })
            .collect();
        pts.extend((n.saturating_sub(tail)..n).map(|i| (self.samples[i], (i + 1) as f64 / n as f64)));
        pts.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.total_cmp(&b.0)));
        pts.dedup_by(|a, b| a.1 == b.1);
        pts
    }

    /// ECDF CSV (`value,cum_prob`) at 1000 probabilities plus the exact tail.
    pub fn write_csv<W: Write>(&mut self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "value,cum_prob")?;
        for (v, p) in self.points(1000, 100) {
            if v.is_finite() {
                writeln!(w, "{v},{p}")?;
            } else {
                writeln!(w, "inf,{p}")?;
            }
        }
        Ok(())
    }
}

impl FromIterator<f64> for EcdfAccumulator {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        Self {
            samples: iter.into_iter().collect(),
            sorted: false,
        }
    }
}
