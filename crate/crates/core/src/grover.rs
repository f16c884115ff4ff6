//! Grover reflections and the two-phase collective decode.
//!
//! The oracle `U_m = I - 2|m><m|` flips the sign of one amplitude. The
//! diffusion `U_S = 2|S><S| - I` reflects about an arbitrary normalized
//! axis `S`, here always a catalog state `|S_k>`.
//!
//! Decoding runs `U_{S_k}` once, picks the most likely outcome `M`, then
//! runs `U_{S_k} U_M`. The generic iteration count is exposed separately
//! by [`iteration_count`]; the decode does not consult it.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{QssError, Result};
use crate::rng;
use crate::statevec::{distribution, inner, BasisLabel, StateVector, C64};

/// Probabilities within this distance of the maximum count as tied.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// `round(pi/4 * sqrt(2^n))`, rounding halves up.
pub fn iteration_count(num_qubits: usize) -> usize {
    let r = std::f64::consts::FRAC_PI_4 * (2f64.powi(num_qubits as i32)).sqrt();
    (r + 0.5).floor() as usize
}

pub(crate) fn flip_phase(amps: &mut [C64], index: usize) {
    amps[index] = -amps[index];
}

/// In-place `2 <axis|v> axis - v`. Linear, so it also acts on unnormalized
/// branches of a larger register.
pub(crate) fn reflect_about(amps: &mut [C64], axis: &[C64]) {
    let overlap: C64 = axis
        .iter()
        .zip(amps.iter())
        .map(|(a, v)| a.conj() * v)
        .sum();
    for (v, a) in amps.iter_mut().zip(axis) {
        *v = a * overlap * 2.0 - *v;
    }
}

/// Applies `U_m = I - 2|m><m|`.
pub fn oracle_apply(s: &StateVector, m: BasisLabel) -> Result<StateVector> {
    s.check_label(m)?;
    let mut amps = s.amplitudes().to_vec();
    flip_phase(&mut amps, m.index());
    Ok(StateVector::from_raw(s.num_qubits(), amps))
}

/// Applies `U_S = 2|S><S| - I`.
pub fn diffusion_apply(s: &StateVector, axis: &StateVector) -> Result<StateVector> {
    // validates sizes
    inner(axis, s)?;
    let mut amps = s.amplitudes().to_vec();
    reflect_about(&mut amps, axis.amplitudes());
    Ok(StateVector::from_raw(s.num_qubits(), amps))
}

/// Dealer-side encoding `|S_k>_m = U_m |S_k>`.
pub fn encode(initial: &StateVector, m: BasisLabel) -> Result<StateVector> {
    oracle_apply(initial, m)
}

/// Every label whose probability is within [`TIE_TOLERANCE`] of the maximum,
/// ascending, together with that maximum.
pub fn argmax_set(dist: &[f64], num_qubits: usize) -> (Vec<BasisLabel>, f64) {
    let max = dist.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tied = BasisLabel::all(num_qubits)
        .filter(|l| dist[l.index()] >= max - TIE_TOLERANCE)
        .collect();
    (tied, max)
}

#[derive(Clone, Debug)]
pub struct DecodePhase1Result {
    pub state: StateVector,
    pub dist: Vec<f64>,
    pub argmax_set: Vec<BasisLabel>,
    pub chosen_m: BasisLabel,
    pub max_prob: f64,
}

/// First decode phase: `U_{S_k}` on the received state, then pick `M`.
///
/// `M` is the lexicographically smallest tied outcome.
pub fn decode_phase1(encoded: &StateVector, initial: &StateVector) -> Result<DecodePhase1Result> {
    decode_phase1_with(encoded, initial, None)
}

/// [`decode_phase1`] with an optional tie override, which must itself be
/// one of the tied outcomes.
pub fn decode_phase1_with(
    encoded: &StateVector,
    initial: &StateVector,
    tie_override: Option<BasisLabel>,
) -> Result<DecodePhase1Result> {
    let state = diffusion_apply(encoded, initial)?;
    let dist = distribution(&state);
    let (argmax_set, max_prob) = argmax_set(&dist, state.num_qubits());
    let chosen_m = match tie_override {
        Some(m) if argmax_set.contains(&m) => m,
        Some(m) => {
            return Err(QssError::OverrideNotTied {
                label: m,
                tied: join_labels(&argmax_set),
            })
        }
        None => argmax_set[0],
    };
    Ok(DecodePhase1Result {
        state,
        dist,
        argmax_set,
        chosen_m,
        max_prob,
    })
}

/// Second decode phase: `U_{S_k} U_M`.
pub fn decode_phase2(
    state: &StateVector,
    marked: BasisLabel,
    initial: &StateVector,
) -> Result<(StateVector, Vec<f64>)> {
    let out = diffusion_apply(&oracle_apply(state, marked)?, initial)?;
    let dist = distribution(&out);
    Ok((out, dist))
}

/// All intermediates of the collective operation `U_{S_k M S_k}`.
#[derive(Clone, Debug)]
pub struct CollectiveOutcome {
    pub phase1: DecodePhase1Result,
    pub final_state: StateVector,
    pub final_dist: Vec<f64>,
}

impl CollectiveOutcome {
    /// Tied most-likely final outcomes and their probability.
    pub fn final_top(&self) -> (Vec<BasisLabel>, f64) {
        argmax_set(&self.final_dist, self.final_state.num_qubits())
    }
}

pub fn collective_op(encoded: &StateVector, initial: &StateVector) -> Result<CollectiveOutcome> {
    collective_op_with(encoded, initial, None)
}

pub fn collective_op_with(
    encoded: &StateVector,
    initial: &StateVector,
    tie_override: Option<BasisLabel>,
) -> Result<CollectiveOutcome> {
    let phase1 = decode_phase1_with(encoded, initial, tie_override)?;
    let (final_state, final_dist) = decode_phase2(&phase1.state, phase1.chosen_m, initial)?;
    Ok(CollectiveOutcome {
        phase1,
        final_state,
        final_dist,
    })
}

/// Shot histogram. Every basis label appears, including those never drawn.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotCounts {
    pub counts: BTreeMap<BasisLabel, u64>,
    pub shots: u64,
    pub seed: u64,
}

impl ShotCounts {
    pub fn count(&self, label: BasisLabel) -> u64 {
        self.counts.get(&label).copied().unwrap_or(0)
    }

    pub fn frequency(&self, label: BasisLabel) -> f64 {
        self.count(label) as f64 / self.shots as f64
    }
}

/// Draws `shots` computational-basis outcomes by inverse CDF over
/// `distribution(s)`, using the generator documented in [`crate::rng`].
pub fn sample(s: &StateVector, shots: u64, seed: u64) -> Result<ShotCounts> {
    if shots == 0 {
        return Err(QssError::ZeroShots);
    }
    let dist = distribution(s);
    let mut rng = rng::seeded(seed);
    let mut hist = vec![0u64; dist.len()];
    for _ in 0..shots {
        hist[rng::draw_index(&mut rng, &dist)] += 1;
    }
    let counts = BasisLabel::all(s.num_qubits()).zip(hist).collect();
    Ok(ShotCounts {
        counts,
        shots,
        seed,
    })
}

pub(crate) fn join_labels(labels: &[BasisLabel]) -> String {
    labels
        .iter()
        .map(|l| l.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevec::{eigen_vector, tensor, EigenAxis, TOLERANCE};
    use proptest::prelude::*;

    fn l(s: &str) -> BasisLabel {
        s.parse().unwrap()
    }

    fn product(axes: [EigenAxis; 3]) -> StateVector {
        let [a, b, c] = axes.map(eigen_vector);
        tensor(&tensor(&a, &b).unwrap(), &c).unwrap()
    }

    fn s1() -> StateVector {
        product([EigenAxis::Plus; 3])
    }

    fn s9() -> StateVector {
        product([EigenAxis::PlusI; 3])
    }

    fn scaled(scale: f64, coeffs: &[(f64, f64)]) -> StateVector {
        StateVector::from_raw(
            3,
            coeffs
                .iter()
                .map(|&(re, im)| C64::new(re, im) * scale)
                .collect(),
        )
    }

    #[test]
    fn iteration_counts() {
        assert_eq!(iteration_count(1), 1);
        assert_eq!(iteration_count(3), 2);
        assert_eq!(iteration_count(4), 3);
    }

    #[test]
    fn oracle_flips_only_marked_amplitude() {
        let e = oracle_apply(&s1(), l("110")).unwrap();
        let r = 1.0 / 8f64.sqrt();
        for lab in BasisLabel::all(3) {
            let want = if lab == l("110") { -r } else { r };
            assert!((e.amplitude(lab).unwrap() - C64::new(want, 0.0)).norm() <= TOLERANCE);
        }
        let back = oracle_apply(&e, l("110")).unwrap();
        assert!(back.approx_eq(&s1(), TOLERANCE));
        let zero = StateVector::basis(l("000"));
        assert!(oracle_apply(&zero, l("111"))
            .unwrap()
            .approx_eq(&zero, TOLERANCE));
    }

    #[test]
    fn oracle_rejects_wrong_width() {
        assert!(matches!(
            oracle_apply(&s1(), l("10")),
            Err(QssError::DimensionMismatch { left: 3, right: 2 })
        ));
    }

    #[test]
    fn diffusion_after_encode_matches_hand_values() {
        let out = diffusion_apply(&encode(&s1(), l("110")).unwrap(), &s1()).unwrap();
        let want = scaled(
            1.0 / (2.0 * 8f64.sqrt()),
            &[
                (1., 0.),
                (1., 0.),
                (1., 0.),
                (1., 0.),
                (1., 0.),
                (1., 0.),
                (5., 0.),
                (1., 0.),
            ],
        );
        assert!(out.approx_eq(&want, TOLERANCE));
        assert!(diffusion_apply(&s1(), &s1())
            .unwrap()
            .approx_eq(&s1(), TOLERANCE));
        let twice = diffusion_apply(&out, &s1()).unwrap();
        assert!(twice.approx_eq(&encode(&s1(), l("110")).unwrap(), TOLERANCE));
    }

    #[test]
    fn encode_s9_negates_marked_amplitude() {
        // |+i+i+i> has amplitude i^popcount / sqrt(8); 110 has popcount 2.
        let e = encode(&s9(), l("110")).unwrap();
        let r = 1.0 / 8f64.sqrt();
        assert!((e.amplitude(l("110")).unwrap() - C64::new(r, 0.0)).norm() <= TOLERANCE);
        assert!((e.amplitude(l("111")).unwrap() - C64::new(0.0, -r)).norm() <= TOLERANCE);
        assert!(oracle_apply(&e, l("110"))
            .unwrap()
            .approx_eq(&s9(), TOLERANCE));
    }

    #[test]
    fn phase1_table_rows() {
        let enc = encode(&s1(), l("110")).unwrap();
        let p1 = decode_phase1(&enc, &s1()).unwrap();
        assert_eq!(p1.argmax_set, vec![l("110")]);
        assert!((p1.max_prob - 25.0 / 32.0).abs() <= TOLERANCE);

        let s2 = product([EigenAxis::Plus, EigenAxis::Plus, EigenAxis::Minus]);
        let p2 = decode_phase1(&enc, &s2).unwrap();
        assert_eq!(p2.argmax_set, vec![l("000"), l("010"), l("100")]);
        assert_eq!(p2.chosen_m, l("000"));
        assert!((p2.max_prob - 9.0 / 32.0).abs() <= TOLERANCE);

        let forced = decode_phase1_with(&enc, &s2, Some(l("010"))).unwrap();
        assert_eq!(forced.chosen_m, l("010"));
        assert!(matches!(
            decode_phase1_with(&enc, &s2, Some(l("111"))),
            Err(QssError::OverrideNotTied { .. })
        ));
    }

    #[test]
    fn phase1_for_s9_matches_brute_force() {
        // Brute force: build U_S as a dense matrix and multiply.
        let s = s9();
        let enc = encode(&s, l("110")).unwrap();
        let a = s.amplitudes();
        let mut out = [C64::new(0.0, 0.0); 8];
        for (i, o) in out.iter_mut().enumerate() {
            for j in 0..8 {
                let delta = if i == j { 1.0 } else { 0.0 };
                *o += (a[i] * a[j].conj() * 2.0 - delta) * enc.amplitudes()[j];
            }
        }
        let probs: Vec<f64> = out.iter().map(|z| z.norm_sqr()).collect();
        let p1 = decode_phase1(&enc, &s).unwrap();
        for (x, y) in probs.iter().zip(&p1.dist) {
            assert!((x - y).abs() <= TOLERANCE);
        }
        assert_eq!(p1.argmax_set, vec![l("110")]);
        assert!((p1.max_prob - 25.0 / 32.0).abs() <= TOLERANCE);
    }

    #[test]
    fn phase2_matches_hand_values() {
        let enc = encode(&s1(), l("110")).unwrap();
        let p1 = decode_phase1(&enc, &s1()).unwrap();
        let (out, dist) = decode_phase2(&p1.state, l("110"), &s1()).unwrap();
        let want = scaled(
            1.0 / (4.0 * 8f64.sqrt()),
            &[
                (-1., 0.),
                (-1., 0.),
                (-1., 0.),
                (-1., 0.),
                (-1., 0.),
                (-1., 0.),
                (11., 0.),
                (-1., 0.),
            ],
        );
        assert!(out.approx_eq(&want, TOLERANCE));
        assert!((dist[6] - 121.0 / 128.0).abs() <= TOLERANCE);
    }

    #[test]
    fn phase2_with_orthogonal_marker_is_pure_diffusion() {
        let basis = StateVector::basis(l("000"));
        let (out, _) = decode_phase2(&basis, l("111"), &s1()).unwrap();
        assert!(out.approx_eq(&diffusion_apply(&basis, &s1()).unwrap(), TOLERANCE));
    }

    #[test]
    fn collective_op_s1_and_s9_chain() {
        let enc = encode(&s1(), l("110")).unwrap();
        let good = collective_op(&enc, &s1()).unwrap();
        assert_eq!(good.final_top().0, vec![l("110")]);
        assert!((good.final_top().1 - 0.9453125).abs() <= TOLERANCE);

        let wrong = collective_op(&enc, &s9()).unwrap();
        assert_eq!(wrong.phase1.chosen_m, l("111"));
        let (top, p) = wrong.final_top();
        assert_eq!(top, ["000", "011", "101", "110", "111"].map(l).to_vec());
        assert!((p - 25.0 / 128.0).abs() <= TOLERANCE);
    }

    #[test]
    fn sampling_basics() {
        let basis = StateVector::basis(l("110"));
        let counts = sample(&basis, 500, 1).unwrap();
        assert_eq!(counts.count(l("110")), 500);
        assert_eq!(counts.counts.len(), 8);
        assert!(matches!(sample(&basis, 0, 1), Err(QssError::ZeroShots)));
        let enc = encode(&s1(), l("110")).unwrap();
        let fin = collective_op(&enc, &s1()).unwrap().final_state;
        assert_eq!(
            sample(&fin, 2048, 99).unwrap(),
            sample(&fin, 2048, 99).unwrap()
        );
        let total: u64 = sample(&fin, 777, 5).unwrap().counts.values().sum();
        assert_eq!(total, 777);
    }

    fn arb_state() -> impl Strategy<Value = StateVector> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 8)
            .prop_filter("non-zero", |v| {
                v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3)
            })
            .prop_map(|v| {
                StateVector::normalized(v.into_iter().map(|(a, b)| C64::new(a, b)).collect())
                    .unwrap()
            })
    }

    proptest! {
        #[test]
        fn reflections_are_norm_preserving_involutions(s in arb_state(), axis in arb_state(), m in 0usize..8) {
            let m = BasisLabel::new(m, 3).unwrap();
            let o = oracle_apply(&s, m).unwrap();
            prop_assert!((o.norm_sqr() - 1.0).abs() <= TOLERANCE);
            prop_assert!(oracle_apply(&o, m).unwrap().approx_eq(&s, TOLERANCE));
            let d = diffusion_apply(&s, &axis).unwrap();
            prop_assert!((d.norm_sqr() - 1.0).abs() <= TOLERANCE);
            prop_assert!(diffusion_apply(&d, &axis).unwrap().approx_eq(&s, TOLERANCE));
        }

        #[test]
        fn diffusion_is_linear(a in arb_state(), b in arb_state(), axis in arb_state(),
                               x in -2.0f64..2.0, y in -2.0f64..2.0) {
            let ca = C64::new(x, y);
            let cb = C64::new(y, -x);
            let mut combo: Vec<C64> = a.amplitudes().iter().zip(b.amplitudes()).map(|(p, q)| ca * p + cb * q).collect();
            reflect_about(&mut combo, axis.amplitudes());
            let da = diffusion_apply(&a, &axis).unwrap();
            let db = diffusion_apply(&b, &axis).unwrap();
            for (i, z) in combo.iter().enumerate() {
                let want = ca * da.amplitudes()[i] + cb * db.amplitudes()[i];
                prop_assert!((z - want).norm() <= 1e-11);
            }
        }

        #[test]
        fn argmax_ignores_global_phase(theta in 0.0f64..std::f64::consts::TAU, m in 0usize..8, k in 0usize..4) {
            let axis = product([EigenAxis::ALL[k], EigenAxis::Plus, EigenAxis::ALL[(k + 1) % 4]]);
            let enc = encode(&axis, BasisLabel::new(m, 3).unwrap()).unwrap();
            let phased = enc.with_global_phase(C64::from_polar(1.0, theta)).unwrap();
            let a = decode_phase1(&enc, &s1()).unwrap();
            let b = decode_phase1(&phased, &s1()).unwrap();
            prop_assert_eq!(&a.argmax_set, &b.argmax_set);
            prop_assert_eq!(a.chosen_m, b.chosen_m);
            for (x, y) in a.dist.iter().zip(&b.dist) {
                prop_assert!((x - y).abs() <= TOLERANCE);
            }
        }
    }
}
