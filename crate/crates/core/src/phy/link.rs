//! Link-to-system abstraction: effective SINR, block error probability and
//! BLER-targeted MCS selection.

use rand::Rng;
use statrs::function::erf::erfc;

use super::mcs::{McsEntry, McsTable};
use crate::error::PhyError;

/// CRC attached to every transport block.
pub const CRC_BITS: u64 = 24;
pub const BLER_FLOOR: f64 = 1e-12;

/// How per-PRB SINRs are compressed into one effective SINR.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum SinrMapping {
    /// Equal mean Shannon capacity: `log2(1 + s_eff) = mean(log2(1 + s_i))`.
    #[default]
    MutualInformation,
    /// Exponential effective SINR with calibration factor `beta`.
    Exponential { beta: f64 },
}

impl SinrMapping {
    pub fn effective(&self, sinrs: &[f64]) -> f64 {
        match *self {
            Self::MutualInformation => effective_sinr(sinrs),
            Self::Exponential { beta } => {
                let mean = sinrs.iter().map(|s| (-s / beta).exp()).sum::<f64>() / sinrs.len() as f64;
                -beta * mean.ln()
            }
        }
    }
}

/// Effective SINR under mutual-information (capacity) averaging.
pub fn effective_sinr(per_prb_sinrs: &[f64]) -> f64 {
    debug_assert!(!per_prb_sinrs.is_empty());
    let mean_cap = per_prb_sinrs.iter().map(|s| s.ln_1p()).sum::<f64>() / per_prb_sinrs.len() as f64;
    mean_cap.exp_m1()
}

/// Gaussian tail probability.
pub fn q_function(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// Block error probability of `tb_bits` over `n_re` channel uses at linear
/// SINR `sinr`, by the finite-blocklength normal approximation. Capacity is
/// capped at the modulation order; the result is clamped to `[1e-12, 1]`.
pub fn bler(sinr: f64, tb_bits: u64, n_re: usize, mcs: &McsEntry) -> f64 {
    debug_assert!(tb_bits > 0 && n_re > 0);
    let n = n_re as f64;
    let l = tb_bits as f64;
    let m = mcs.mod_order as f64;
    if l > n * m {
        return 1.0;
    }
    // Past the point where log2(1+s) reaches the modulation order, extra SINR
    // buys neither capacity nor a dispersion change.
    let s = sinr.max(0.0).min(2f64.powf(m) - 1.0);
    let capacity = s.ln_1p() / std::f64::consts::LN_2;
    let log2e = std::f64::consts::LOG2_E;
    let dispersion = (1.0 - (1.0 + s).powi(-2)) * log2e * log2e;
    if dispersion <= 0.0 {
        return 1.0;
    }
    let z = (n * capacity - l + 0.5 * n.log2()) / (n * dispersion).sqrt();
    q_function(z).clamp(BLER_FLOOR, 1.0)
}

/// Outcome of link adaptation for one transport block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McsChoice {
    pub mcs: usize,
    pub n_prb: usize,
    pub tb_bits: u64,
    pub predicted_bler: f64,
}

pub fn bits_per_prb(mcs: &McsEntry, res_per_prb: usize) -> f64 {
    res_per_prb as f64 * mcs.spectral_efficiency
}

/// PRBs needed to carry `tb_bits` at `mcs`.
pub fn prbs_needed(tb_bits: u64, mcs: &McsEntry, res_per_prb: usize) -> usize {
    (tb_bits as f64 / bits_per_prb(mcs, res_per_prb)).ceil() as usize
}

/// Highest MCS whose predicted first-transmission BLER meets `bler_target`
/// for a `tb_bits` block (payload plus CRC), sized to the fewest PRBs.
/// Falls back to MCS 0 when no entry meets the target. Fails when the
/// resulting allocation exceeds `prb_budget`.
pub fn select_mcs(
    sinr_eff: f64,
    bler_target: f64,
    prb_budget: usize,
    tb_bits: u64,
    table: &McsTable,
    res_per_prb: usize,
) -> Result<McsChoice, PhyError> {
    let choice = table
        .entries()
        .iter()
        .rev()
        .map(|e| {
            let n_prb = prbs_needed(tb_bits, e, res_per_prb);
            McsChoice {
                mcs: e.index,
                n_prb,
                tb_bits,
                predicted_bler: bler(sinr_eff, tb_bits, n_prb * res_per_prb, e),
            }
        })
        .find(|c| c.predicted_bler <= bler_target)
        .unwrap_or_else(|| {
            let e = table.get(0);
            let n_prb = prbs_needed(tb_bits, e, res_per_prb);
            McsChoice {
                mcs: 0,
                n_prb,
                tb_bits,
                predicted_bler: bler(sinr_eff, tb_bits, n_prb * res_per_prb, e),
            }
        });
    debug_assert!(choice.mcs == 0 || choice.predicted_bler <= bler_target);
    if choice.n_prb > prb_budget {
        return Err(PhyError::AllocationInfeasible {
            needed: choice.n_prb,
            budget: prb_budget,
        });
    }
    Ok(choice)
}

/// Link adaptation for a fixed allocation of `n_prb` PRBs that the block
/// fills completely (segments and full-buffer traffic). Returns `None` when
/// not even the highest MCS leaves room for payload beyond the CRC.
pub fn select_mcs_for_prbs(
    sinr_eff: f64,
    bler_target: f64,
    n_prb: usize,
    table: &McsTable,
    res_per_prb: usize,
) -> Option<McsChoice> {
    let n_re = n_prb * res_per_prb;
    let sized = |e: &McsEntry| {
        let tb_bits = (bits_per_prb(e, res_per_prb) * n_prb as f64).floor() as u64;
        (tb_bits > CRC_BITS).then(|| McsChoice {
            mcs: e.index,
            n_prb,
            tb_bits,
            predicted_bler: bler(sinr_eff, tb_bits, n_re, e),
        })
    };
    let feasible: Vec<McsChoice> = table.entries().iter().filter_map(sized).collect();
    let lowest = *feasible.first()?;
    let choice = feasible
        .iter()
        .rev()
        .find(|c| c.predicted_bler <= bler_target)
        .copied()
        .unwrap_or(lowest);
    Some(choice)
}

/// Chase-combining decode: attempts' effective SINRs add up; the block is
/// received when a uniform draw exceeds the BLER at the combined SINR.
pub fn decode<R: Rng>(
    attempts: &[f64],
    mcs: &McsEntry,
    tb_bits: u64,
    n_re: usize,
    rng: &mut R,
) -> bool {
    debug_assert!(!attempts.is_empty());
    let combined: f64 = attempts.iter().sum();
    let p = bler(combined, tb_bits, n_re, mcs);
    rng.random::<f64>() > p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::db_to_lin;
    use crate::seed::SeedPolicy;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn table() -> McsTable {
        McsTable::builtin()
    }

    #[test]
    fn effective_sinr_examples() {
        assert_relative_eq!(effective_sinr(&[4.2, 4.2, 4.2]), 4.2, max_relative = 1e-12);
        // capacities {1, 1, 2} average to 4/3
        assert_relative_eq!(effective_sinr(&[1.0, 1.0, 3.0]), 1.5198420997897463, max_relative = 1e-12);
    }

    #[test]
    fn eesm_mapping_is_idempotent() {
        let m = SinrMapping::Exponential { beta: 3.0 };
        assert_relative_eq!(m.effective(&[2.0, 2.0]), 2.0, max_relative = 1e-12);
        assert!(m.effective(&[1.0, 9.0]) < 5.0);
    }

    #[test]
    fn bler_reference_values() {
        // values from an independent high-precision evaluation of the Q-expression
        let t = table();
        let s = 0.37836976685038981;
        assert_relative_eq!(bler(s, 400, 864, t.get(14)), 0.4336377739675754, max_relative = 1e-9);
        assert_relative_eq!(bler(db_to_lin(5.0), 424, 180, t.get(3)), 0.9960610735656365, max_relative = 1e-9);
        assert_relative_eq!(bler(db_to_lin(0.0), 424, 360, t.get(0)), 0.9941429448030049, max_relative = 1e-9);
        assert_relative_eq!(bler(db_to_lin(10.0), 12024, 3600, t.get(6)), 2.138495595883044e-7, max_relative = 1e-6);
        assert_relative_eq!(bler(db_to_lin(12.0), 424, 108, t.get(6)), 0.0970732424749111, max_relative = 1e-9);
    }

    #[test]
    fn bler_limits() {
        let t = table();
        assert_eq!(bler(1e9, 424, 360, t.get(14)), BLER_FLOOR);
        // more bits than the constellation can carry
        assert_eq!(bler(1e9, 800, 360, t.get(0)), 1.0);
    }

    #[test]
    fn top_mcs_at_high_sinr_uses_two_prbs_for_fifty_bytes() {
        let c = select_mcs(1e6, 0.01, 100, 424, &table(), 36).unwrap();
        assert_eq!(c.mcs, 14);
        assert_eq!(c.n_prb, 2);
    }

    #[test]
    fn mid_efficiency_sizing() {
        // 424 bits at 2.57 bits/RE over 36 RE/PRB
        let e = McsEntry {
            index: 0,
            mod_order: 4,
            code_rate: 0.6425,
            spectral_efficiency: 2.57,
        };
        assert_eq!(prbs_needed(424, &e, 36), 5);
    }

    #[test]
    fn infeasible_allocation_is_reported() {
        let err = select_mcs(1e-3, 0.01, 100, 12024, &table(), 36).unwrap_err();
        assert_eq!(
            err,
            PhyError::AllocationInfeasible {
                needed: 2194,
                budget: 100
            }
        );
    }

    #[test]
    fn fixed_allocation_fills_the_prbs() {
        let c = select_mcs_for_prbs(1e6, 0.01, 100, &table(), 36).unwrap();
        assert_eq!(c.mcs, 14);
        assert_eq!(c.tb_bits, (3600.0f64 * 7.4063).floor() as u64);
        // one PRB at the lowest efficiency cannot hold the CRC
        let c = select_mcs_for_prbs(1e-3, 0.01, 1, &table(), 36).unwrap();
        assert!(c.tb_bits > CRC_BITS);
        assert_eq!(c.mcs, 2);
    }

    #[test]
    fn combining_lowers_error_probability() {
        let t = table();
        let e = t.get(6);
        let s = db_to_lin(11.0);
        assert!(bler(2.0 * s, 424, 108, e) < bler(s, 424, 108, e));
        let mut a = SeedPolicy::new(4, 0).rng("decode");
        let mut b = SeedPolicy::new(4, 0).rng("decode");
        let seq_a: Vec<bool> = (0..64).map(|_| decode(&[s], e, 424, 108, &mut a)).collect();
        let seq_b: Vec<bool> = (0..64).map(|_| decode(&[s], e, 424, 108, &mut b)).collect();
        assert_eq!(seq_a, seq_b);
        let mut r = SeedPolicy::new(5, 0).rng("decode");
        assert!((0..10_000).all(|_| decode(&[1e9], t.get(14), 424, 360, &mut r)));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]

        #[test]
        fn bler_monotone_in_sinr_and_bits(
            s_db in -10.0f64..40.0,
            ds in 0.0f64..10.0,
            bits in 25u64..20_000,
            dbits in 0u64..2000,
            n_re in 36usize..7200,
            mcs in 0usize..15,
        ) {
            let t = table();
            let e = t.get(mcs);
            let s = db_to_lin(s_db);
            prop_assert!(bler(db_to_lin(s_db + ds), bits, n_re, e) <= bler(s, bits, n_re, e));
            prop_assert!(bler(s, bits + dbits, n_re, e) >= bler(s, bits, n_re, e));
        }

        #[test]
        fn effective_sinr_bounded_and_permutation_invariant(
            mut v in prop::collection::vec(1e-3f64..1e4, 1..50),
        ) {
            let eff = effective_sinr(&v);
            let lo = v.iter().cloned().fold(f64::MAX, f64::min);
            let hi = v.iter().cloned().fold(f64::MIN, f64::max);
            prop_assert!(eff >= lo * (1.0 - 1e-9) && eff <= hi * (1.0 + 1e-9));
            v.reverse();
            prop_assert!((effective_sinr(&v) - eff).abs() <= 1e-9 * eff);
        }

        #[test]
        fn selection_respects_target_unless_fallback(
            s_db in -10.0f64..40.0,
            payload in 1u64..3000,
        ) {
            let t = table();
            let bits = payload * 8 + CRC_BITS;
            let c = match select_mcs(db_to_lin(s_db), 0.01, usize::MAX, bits, &t, 36) {
                Ok(c) => c,
                Err(e) => return Err(TestCaseError::fail(format!("{e}"))),
            };
            prop_assert!(c.mcs == 0 || c.predicted_bler <= 0.01);
            prop_assert_eq!(c.n_prb, prbs_needed(bits, t.get(c.mcs), 36));
        }
    }
}
