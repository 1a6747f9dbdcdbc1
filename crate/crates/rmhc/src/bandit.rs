//! Per-gene two-armed bandits for mutation selection.
//!
//! Each gene of the genome owns a tiny bandit with one arm per reachable
//! bit value. Arm `j` accumulates the fitness changes observed whenever a
//! flip of that gene landed on value `j`. At every generation the climber
//! asks the array for the gene with the highest *urgency*:
//!
//! ```text
//! urgency_i = -max_j mean_delta_i(j) + sqrt(ln(N_i + 1) / (2 * N_i(j*))) + u
//! ```
//!
//! where `N_i` is how often gene `i` was selected, `j*` the visited arm
//! with the best empirical mean, `N_i(j*)` its pull count, and `u` a
//! uniform draw on `[0, 1e-6)` that randomizes ties. The exploitation term
//! is *negated* relative to ordinary UCB: a gene whose flips have been
//! observed to pay off is already in a good state and should be left
//! alone, while genes that hurt when flipped (or that drift on plateaus)
//! become urgent again as the exploration term grows with `N_i`.
//!
//! Genes that were never selected outrank every visited gene; the tie-break
//! term orders the unvisited genes uniformly at random, so a fresh array is
//! probed in a random permutation.

use std::io::{self, Write};

use crate::rng::RngStream;

/// Urgency assigned to a gene that has never been selected.
///
/// Any visited urgency is `-mean + exploration + u` with `|mean|` bounded
/// by the largest observed |fitness delta| and the exploration term below
/// `sqrt(ln(N+1)/2)`, so this constant dominates for every fitness range
/// used here while staying small enough that adding the `1e-6` tie-break
/// still lands on distinct floats.
pub const UNVISITED_URGENCY: f64 = 1e6;

/// Width of the uniform tie-break term added to every urgency.
pub const TIE_BREAK_SCALE: f64 = 1e-6;

/// Pull count and summed fitness deltas for one transition target.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ArmStats {
    pulls: u64,
    delta_sum: f64,
}

impl ArmStats {
    pub fn pulls(&self) -> u64 {
        self.pulls
    }

    pub fn delta_sum(&self) -> f64 {
        self.delta_sum
    }

    /// Empirical mean fitness change, `None` while the arm is unvisited.
    pub fn mean(&self) -> Option<f64> {
        (self.pulls > 0).then(|| self.delta_sum / self.pulls as f64)
    }

    fn record(&mut self, delta: f64) {
        self.pulls += 1;
        self.delta_sum += delta;
    }
}

/// The two-armed bandit of a single gene. Arm `false` tracks flips that
/// landed on 0, arm `true` flips that landed on 1.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GeneBandit {
    arms: [ArmStats; 2],
}

impl GeneBandit {
    pub fn arm(&self, reached: bool) -> &ArmStats {
        &self.arms[reached as usize]
    }

    /// Total number of times this gene was selected (both arms).
    pub fn selections(&self) -> u64 {
        self.arms[0].pulls + self.arms[1].pulls
    }

    /// Urgency score; consumes exactly one tie-break draw from `rng`.
    ///
    /// An unvisited arm is excluded from the inner max rather than given an
    /// optimistic prior, so right after the first selection the score is
    /// driven entirely by the one observed transition.
    pub fn urgency(&self, rng: &mut RngStream) -> f64 {
        let tie_break = rng.uniform() * TIE_BREAK_SCALE;
        let selections = self.selections();
        if selections == 0 {
            return UNVISITED_URGENCY + tie_break;
        }
        let (best_mean, best_pulls) = self
            .arms
            .iter()
            .filter_map(|arm| arm.mean().map(|m| (m, arm.pulls)))
            .reduce(|best, cand| if cand.0 > best.0 { cand } else { best })
            .expect("selections > 0 implies a visited arm");
        let exploration = ((selections as f64 + 1.0).ln() / (2.0 * best_pulls as f64)).sqrt();
        -best_mean + exploration + tie_break
    }

    fn record(&mut self, reached: bool, delta: f64) {
        self.arms[reached as usize].record(delta);
    }
}

/// One bandit per gene plus the total selection count.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneBanditArray {
    bandits: Vec<GeneBandit>,
    total_selections: u64,
}

impl GeneBanditArray {
    /// Creates `n` fresh bandits. Panics if `n` is zero.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "a bandit array needs at least one gene");
        Self {
            bandits: vec![GeneBandit::default(); n],
            total_selections: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.bandits.len()
    }

    pub fn is_empty(&self) -> bool {
        false // at least one gene by construction
    }

    pub fn gene(&self, i: usize) -> &GeneBandit {
        &self.bandits[i]
    }

    pub fn genes(&self) -> &[GeneBandit] {
        &self.bandits
    }

    /// Sum of selections across all genes; equals the number of
    /// [`record_outcome`](Self::record_outcome) calls.
    pub fn total_selections(&self) -> u64 {
        self.total_selections
    }

    /// Index of the gene with maximal urgency.
    ///
    /// Consumes one tie-break draw per gene, in index order. While any
    /// gene is unvisited, only unvisited genes can win.
    pub fn select_gene(&self, rng: &mut RngStream) -> usize {
        let mut best = 0;
        let mut best_urgency = f64::NEG_INFINITY;
        for (i, bandit) in self.bandits.iter().enumerate() {
            let urgency = bandit.urgency(rng);
            if urgency > best_urgency {
                best = i;
                best_urgency = urgency;
            }
        }
        best
    }

    /// Adds one observation: selecting `gene` made its bit reach `reached`
    /// and changed fitness by `delta`. No other bandit is touched.
    ///
    /// Panics if `gene` is out of range.
    pub fn record_outcome(&mut self, gene: usize, reached: bool, delta: f64) {
        assert!(
            gene < self.bandits.len(),
            "gene index {gene} out of range for {} bandits",
            self.bandits.len()
        );
        self.bandits[gene].record(reached, delta);
        self.total_selections += 1;
    }

    /// Debug dump: one CSV row per gene with pull counts and mean deltas.
    /// Unvisited arms print an empty mean.
    pub fn write_stats_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "gene_index,n0,n1,mean_delta0,mean_delta1")?;
        for (i, bandit) in self.bandits.iter().enumerate() {
            let fmt_mean = |arm: &ArmStats| match arm.mean() {
                Some(m) => format!("{m}"),
                None => String::new(),
            };
            writeln!(
                w,
                "{i},{},{},{},{}",
                bandit.arm(false).pulls(),
                bandit.arm(true).pulls(),
                fmt_mean(bandit.arm(false)),
                fmt_mean(bandit.arm(true)),
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bandit_with(arm0: Option<(u64, f64)>, arm1: Option<(u64, f64)>) -> GeneBandit {
        let mut b = GeneBandit::default();
        if let Some((pulls, sum)) = arm0 {
            b.arms[0] = ArmStats {
                pulls,
                delta_sum: sum,
            };
        }
        if let Some((pulls, sum)) = arm1 {
            b.arms[1] = ArmStats {
                pulls,
                delta_sum: sum,
            };
        }
        b
    }

    #[test]
    fn arm_mean_is_the_running_average() {
        let mut arm = ArmStats::default();
        assert_eq!(arm.mean(), None);
        arm.record(1.0);
        assert_eq!(arm.mean(), Some(1.0));
        arm.record(0.0);
        assert_eq!(arm.mean(), Some(0.5));
    }

    #[test]
    fn unvisited_gene_gets_the_sentinel() {
        let b = GeneBandit::default();
        let u = b.urgency(&mut RngStream::seeded(0));
        assert!(u >= UNVISITED_URGENCY);
        assert!(u < UNVISITED_URGENCY + TIE_BREAK_SCALE);
    }

    #[test]
    fn urgency_matches_hand_computed_values() {
        // One pull on arm 1 with delta +1: -1 + sqrt(ln 2 / 2) + u.
        let b = bandit_with(None, Some((1, 1.0)));
        let expect = -1.0 + (2f64.ln() / 2.0).sqrt();
        let u = b.urgency(&mut RngStream::seeded(1));
        assert!(u >= expect && u < expect + TIE_BREAK_SCALE, "urgency {u}");
        assert!((expect - (-0.4113)).abs() < 1e-4);

        // One pull on arm 0 with delta -1: +1 + sqrt(ln 2 / 2) + u.
        let b = bandit_with(Some((1, -1.0)), None);
        let expect = 1.0 + (2f64.ln() / 2.0).sqrt();
        let u = b.urgency(&mut RngStream::seeded(1));
        assert!(u >= expect && u < expect + TIE_BREAK_SCALE, "urgency {u}");
        assert!((expect - 1.5887).abs() < 1e-4);
    }

    #[test]
    fn exploration_term_uses_the_best_arm_pull_count() {
        // Arm 1 is best (mean 2.0, 1 pull), arm 0 worse (mean -1, 4 pulls).
        // N_i = 5, N_i(j*) = 1.
        let b = bandit_with(Some((4, -4.0)), Some((1, 2.0)));
        let expect = -2.0 + (6f64.ln() / 2.0).sqrt();
        let u = b.urgency(&mut RngStream::seeded(2));
        assert!(u >= expect && u < expect + TIE_BREAK_SCALE, "urgency {u}");
    }

    #[test]
    fn unvisited_genes_outrank_visited_ones() {
        let mut arr = GeneBanditArray::new(2);
        // Gene 1 visited with a *terrible* outcome (high urgency for a
        // visited gene); gene 0 untouched and must still win.
        arr.record_outcome(1, false, -1000.0);
        let mut rng = RngStream::seeded(3);
        for _ in 0..20 {
            assert_eq!(arr.select_gene(&mut rng), 0);
        }
    }

    #[test]
    fn higher_urgency_wins() {
        let mut arr = GeneBanditArray::new(2);
        arr.record_outcome(0, false, -1.0); // urgency ~ +1.5887
        arr.record_outcome(1, true, 1.0); // urgency ~ -0.4113
        let mut rng = RngStream::seeded(4);
        for _ in 0..20 {
            assert_eq!(arr.select_gene(&mut rng), 0);
        }
    }

    #[test]
    fn ties_break_uniformly_across_genes() {
        let n = 4;
        let trials = 100_000u32;
        // Fresh array: all genes unvisited and tied at the sentinel.
        let arr = GeneBanditArray::new(n);
        let mut rng = RngStream::seeded(5);
        let mut counts = vec![0u32; n];
        for _ in 0..trials {
            counts[arr.select_gene(&mut rng)] += 1;
        }
        let p = 1.0 / n as f64;
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        for (i, &c) in counts.iter().enumerate() {
            let freq = c as f64 / trials as f64;
            assert!(
                (freq - p).abs() <= 3.0 * sigma,
                "gene {i} frequency {freq} vs {p} ± {}",
                3.0 * sigma
            );
        }

        // Identical *visited* statistics tie as well.
        let mut arr = GeneBanditArray::new(n);
        for gene in 0..n {
            arr.record_outcome(gene, true, 0.25);
        }
        let mut counts = vec![0u32; n];
        for _ in 0..trials {
            counts[arr.select_gene(&mut rng)] += 1;
        }
        for (i, &c) in counts.iter().enumerate() {
            let freq = c as f64 / trials as f64;
            assert!(
                (freq - p).abs() <= 3.0 * sigma,
                "visited gene {i} frequency {freq}"
            );
        }
    }

    #[test]
    fn record_outcome_examples() {
        let mut arr = GeneBanditArray::new(4);
        arr.record_outcome(2, true, 1.0);
        assert_eq!(arr.gene(2).selections(), 1);
        assert_eq!(arr.gene(2).arm(true).pulls(), 1);
        assert_eq!(arr.gene(2).arm(true).mean(), Some(1.0));

        arr.record_outcome(2, true, 0.0);
        assert_eq!(arr.gene(2).arm(true).pulls(), 2);
        assert_eq!(arr.gene(2).arm(true).mean(), Some(0.5));

        arr.record_outcome(2, false, -1.0);
        assert_eq!(arr.gene(2).selections(), 3);
        assert_eq!(arr.gene(2).arm(false).mean(), Some(-1.0));
        assert_eq!(arr.gene(2).arm(true).mean(), Some(0.5));
        assert_eq!(arr.total_selections(), 3);

        for other in [0, 1, 3] {
            assert_eq!(arr.gene(other).selections(), 0, "gene {other} untouched");
        }
    }

    #[test]
    #[should_panic(expected = "out of range")]
    fn record_outcome_rejects_bad_gene_index() {
        GeneBanditArray::new(3).record_outcome(3, false, 0.0);
    }

    #[test]
    #[should_panic(expected = "at least one gene")]
    fn empty_array_is_rejected() {
        GeneBanditArray::new(0);
    }

    #[test]
    fn selection_is_deterministic_under_a_seed() {
        // Identical statistics everywhere, so selection is decided purely
        // by the seeded tie-break draws.
        let mut arr = GeneBanditArray::new(16);
        for g in 0..16 {
            arr.record_outcome(g, true, 1.0);
        }
        let picks = |seed| {
            let mut rng = RngStream::seeded(seed);
            (0..50).map(|_| arr.select_gene(&mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(picks(99), picks(99));
        assert_ne!(picks(99), picks(100));
    }

    #[test]
    fn stats_csv_has_one_row_per_gene() {
        let mut arr = GeneBanditArray::new(3);
        arr.record_outcome(1, true, 2.0);
        let mut out = Vec::new();
        arr.write_stats_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "gene_index,n0,n1,mean_delta0,mean_delta1");
        assert_eq!(lines[2], "1,0,1,,2");
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            /// Accounting: k recorded outcomes mean k total selections and
            /// k pulls summed across all arms.
            #[test]
            fn accounting_matches_recorded_outcomes(
                outcomes in proptest::collection::vec(
                    (0usize..8, any::<bool>(), -10.0f64..10.0), 0..64),
            ) {
                let mut arr = GeneBanditArray::new(8);
                for &(gene, reached, delta) in &outcomes {
                    arr.record_outcome(gene, reached, delta);
                }
                prop_assert_eq!(arr.total_selections(), outcomes.len() as u64);
                let pulls: u64 = arr.genes().iter().map(GeneBandit::selections).sum();
                prop_assert_eq!(pulls, outcomes.len() as u64);
            }

            /// While any gene is unvisited, a visited gene is never selected;
            /// in particular the first n selections hit n distinct genes.
            #[test]
            fn fresh_genes_are_probed_first(seed in any::<u64>(), n in 1usize..32) {
                let mut arr = GeneBanditArray::new(n);
                let mut rng = RngStream::seeded(seed);
                let mut seen = vec![false; n];
                for step in 0..n {
                    let g = arr.select_gene(&mut rng);
                    prop_assert!(!seen[g], "step {}: revisit before full probe", step);
                    seen[g] = true;
                    arr.record_outcome(g, rng.bit(), rng.standard_normal());
                }
                prop_assert!(seen.iter().all(|&s| s));
            }

            /// With counts held fixed, urgency strictly decreases as the
            /// best arm's mean delta grows (the inverted exploitation term).
            #[test]
            fn urgency_decreases_in_best_mean(
                pulls in 1u64..50,
                lo in -5.0f64..5.0,
                bump in 0.01f64..5.0,
            ) {
                let base = bandit_with(Some((pulls, lo * pulls as f64)), None);
                let better = bandit_with(Some((pulls, (lo + bump) * pulls as f64)), None);
                // Strip the tie-break by comparing against its upper bound.
                let mut rng = RngStream::seeded(0);
                let u_base = base.urgency(&mut rng);
                let u_better = better.urgency(&mut rng);
                prop_assert!(u_better < u_base + TIE_BREAK_SCALE);
                prop_assert!(u_base - u_better > bump - TIE_BREAK_SCALE);
            }

            /// With the best arm's pulls held fixed, growing total selections
            /// grows the exploration bonus.
            #[test]
            fn urgency_grows_with_total_selections(extra in 1u64..200) {
                // Arm 1 stays best (mean 5.0, one pull); arm 0 accumulates
                // `extra` pulls at mean -1.
                let before = bandit_with(Some((1, -1.0)), Some((1, 5.0)));
                let after = bandit_with(Some((1 + extra, -(1.0 + extra as f64))), Some((1, 5.0)));
                let mut rng = RngStream::seeded(0);
                let u_before = before.urgency(&mut rng);
                let u_after = after.urgency(&mut rng);
                prop_assert!(u_after > u_before - TIE_BREAK_SCALE);
            }

            /// The tie-break term cannot override an urgency gap of at
            /// least its own width.
            #[test]
            fn tie_break_cannot_flip_clear_gaps(seed in any::<u64>()) {
                let mut arr = GeneBanditArray::new(2);
                // Gene 0: mean delta -1 => urgency ~ 1.589.
                // Gene 1: mean delta -1 + 2e-6 => urgency lower by 2e-6 > 1e-6.
                arr.record_outcome(0, false, -1.0);
                arr.record_outcome(1, false, -1.0 + 2e-6);
                let mut rng = RngStream::seeded(seed);
                prop_assert_eq!(arr.select_gene(&mut rng), 0);
            }
        }
    }
}
