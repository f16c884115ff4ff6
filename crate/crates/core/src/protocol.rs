//! Dealer `D` and participants `P1..P3` as a per-round state machine.
//!
//! A round runs prepare, distribute, ack, announce, collective decode,
//! local measurement, report, verdict. Participant `Pi` holds qubit `i`
//! and reports bit `i` of the measured outcome. The classical channel is
//! modelled only as transcript events.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::catalog::{initial_state, CatalogIndex, MarkedStateSets};
use crate::error::{QssError, Result};
use crate::grover::{self, CollectiveOutcome};
use crate::report::{self, markdown_table, round12, OutputFormat};
use crate::rng;
use crate::statevec::BasisLabel;

pub const PARTICIPANTS: usize = 3;

/// A 3-bit share carried by one message round.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Share(pub BasisLabel);

/// Splits a secret bit string into consecutive 3-bit shares, each of which
/// must be a message code of `sets`.
pub fn split_secret(secret: &str, sets: &MarkedStateSets) -> Result<Vec<Share>> {
    let secret = secret.trim();
    if secret.is_empty()
        || !secret.len().is_multiple_of(3)
        || !secret.bytes().all(|b| b == b'0' || b == b'1')
    {
        return Err(QssError::SecretFormat(secret.to_string()));
    }
    secret
        .as_bytes()
        .chunks(3)
        .map(|chunk| {
            let label = BasisLabel::from_bits(std::str::from_utf8(chunk).expect("ascii"))?;
            if sets.is_message(label) {
                Ok(Share(label))
            } else {
                Err(QssError::ChunkNotMessage(label))
            }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoundKind {
    Message,
    CheatDetect,
}

/// What a participant does with the bit it measured.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Behavior {
    #[default]
    Honest,
    /// Reports the complement of the measured bit.
    Flip,
    /// Never reports.
    Silent,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum MeasurementMode {
    /// Participants read the most likely final outcome.
    #[default]
    Deterministic,
    /// One seeded shot from the final distribution.
    Sampled,
}

#[derive(Clone, Debug)]
pub struct RoundConfig {
    pub k: CatalogIndex,
    pub marked: BasisLabel,
    pub kind: RoundKind,
    pub behaviors: [Behavior; PARTICIPANTS],
    pub measurement: MeasurementMode,
    pub seed: u64,
    pub sets: MarkedStateSets,
}

impl RoundConfig {
    /// All-honest deterministic round with the default code sets.
    pub fn honest(k: CatalogIndex, marked: BasisLabel, kind: RoundKind) -> Self {
        Self {
            k,
            marked,
            kind,
            behaviors: [Behavior::Honest; PARTICIPANTS],
            measurement: MeasurementMode::Deterministic,
            seed: 0,
            sets: MarkedStateSets::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self.kind {
            RoundKind::Message => self.sets.is_message(self.marked),
            RoundKind::CheatDetect => self.sets.is_cheat_detect(self.marked),
        };
        if !ok {
            return Err(QssError::Schedule(format!(
                "{} is not a valid {:?} code",
                self.marked, self.kind
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Accept,
    Reject,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VerdictReason {
    Match,
    NoDeclaration {
        participant: u8,
    },
    Mismatch {
        reported: BasisLabel,
        expected: BasisLabel,
    },
}

impl fmt::Display for VerdictReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Match => f.write_str("reports match the prepared code"),
            Self::NoDeclaration { participant } => write!(f, "no declaration from P{participant}"),
            Self::Mismatch { reported, expected } => {
                write!(f, "reported {reported} but prepared {expected}")
            }
        }
    }
}

/// One transcript entry. `Prepare` deliberately omits the marked state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum Event {
    Prepare {
        k: CatalogIndex,
    },
    Distribute {
        qubit: u8,
        participant: u8,
    },
    Ack {
        participant: u8,
    },
    Announce {
        k: CatalogIndex,
    },
    CollectiveOp {
        #[serde(rename = "M")]
        chosen_m: BasisLabel,
        phase1_max: f64,
        final_distribution: Vec<f64>,
    },
    LocalMeasure {
        participant: u8,
        bit: u8,
    },
    Report {
        participant: u8,
        bit: u8,
    },
    Verdict {
        verdict: Verdict,
        reason: VerdictReason,
    },
}

impl Event {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Prepare { .. } => "prepare",
            Self::Distribute { .. } => "distribute",
            Self::Ack { .. } => "ack",
            Self::Announce { .. } => "announce",
            Self::CollectiveOp { .. } => "collective_op",
            Self::LocalMeasure { .. } => "local_measure",
            Self::Report { .. } => "report",
            Self::Verdict { .. } => "verdict",
        }
    }

    fn detail(&self) -> String {
        match self {
            Self::Prepare { k } => format!("k={k}"),
            Self::Distribute { qubit, participant } => format!("qubit {qubit} -> P{participant}"),
            Self::Ack { participant } => format!("P{participant}"),
            Self::Announce { k } => format!("k={k}"),
            Self::CollectiveOp {
                chosen_m,
                phase1_max,
                final_distribution,
            } => {
                let top = final_distribution.iter().copied().fold(0.0, f64::max);
                format!(
                    "M={chosen_m} phase1_max={} final_max={}",
                    report::round3(*phase1_max),
                    report::round3(top)
                )
            }
            Self::LocalMeasure { participant, bit } | Self::Report { participant, bit } => {
                format!("P{participant} bit={bit}")
            }
            Self::Verdict { verdict, reason } => format!("{verdict:?}: {reason}").to_lowercase(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolTranscript {
    pub round: usize,
    pub kind: RoundKind,
    pub events: Vec<Event>,
}

impl ProtocolTranscript {
    pub fn verdict(&self) -> Option<Verdict> {
        self.events.iter().rev().find_map(|e| match e {
            Event::Verdict { verdict, .. } => Some(*verdict),
            _ => None,
        })
    }

    /// Reported bits indexed by participant, `None` where nothing was said.
    pub fn reports(&self) -> [Option<u8>; PARTICIPANTS] {
        let mut out = [None; PARTICIPANTS];
        for e in &self.events {
            if let Event::Report { participant, bit } = e {
                if let Some(slot) = out.get_mut(*participant as usize - 1) {
                    *slot = Some(*bit);
                }
            }
        }
        out
    }

    /// Index of `Announce` is after every `Ack`, and there are exactly three acks.
    pub fn announce_follows_acks(&self) -> bool {
        let acks: Vec<usize> = self
            .events
            .iter()
            .enumerate()
            .filter(|(_, e)| matches!(e, Event::Ack { .. }))
            .map(|(i, _)| i)
            .collect();
        let announce = self
            .events
            .iter()
            .position(|e| matches!(e, Event::Announce { .. }));
        match announce {
            Some(a) => acks.len() == PARTICIPANTS && acks.iter().all(|&i| i < a),
            None => false,
        }
    }
}

/// Dealer check: accept iff all three reports are present and spell `expected`.
pub fn dealer_verify(t: &ProtocolTranscript, expected: BasisLabel) -> (Verdict, VerdictReason) {
    let reports = t.reports();
    let mut bits = [0u8; PARTICIPANTS];
    for (i, r) in reports.iter().enumerate() {
        match r {
            Some(b) => bits[i] = *b,
            None => {
                return (
                    Verdict::Reject,
                    VerdictReason::NoDeclaration {
                        participant: i as u8 + 1,
                    },
                )
            }
        }
    }
    let reported = BasisLabel::from_bit_slice(&bits).expect("three bits");
    if reported == expected {
        (Verdict::Accept, VerdictReason::Match)
    } else {
        (
            Verdict::Reject,
            VerdictReason::Mismatch { reported, expected },
        )
    }
}

fn measured_outcome(outcome: &CollectiveOutcome, mode: MeasurementMode, seed: u64) -> BasisLabel {
    match mode {
        MeasurementMode::Deterministic => outcome.final_top().0[0],
        MeasurementMode::Sampled => {
            let mut r = rng::seeded(seed);
            let idx = rng::draw_index(&mut r, &outcome.final_dist);
            BasisLabel::new(idx, 3).expect("3-qubit outcome")
        }
    }
}

/// Runs one round and appends the dealer's verdict.
pub fn run_round(cfg: &RoundConfig, round: usize) -> Result<ProtocolTranscript> {
    cfg.validate()?;
    let mut events = Vec::with_capacity(16);
    let prepared = initial_state(cfg.k);
    let encoded = grover::encode(&prepared, cfg.marked)?;
    events.push(Event::Prepare { k: cfg.k });
    for p in 1..=PARTICIPANTS as u8 {
        events.push(Event::Distribute {
            qubit: p,
            participant: p,
        });
    }
    for p in 1..=PARTICIPANTS as u8 {
        events.push(Event::Ack { participant: p });
    }
    events.push(Event::Announce { k: cfg.k });

    let outcome = grover::collective_op(&encoded, &initial_state(cfg.k))?;
    events.push(Event::CollectiveOp {
        chosen_m: outcome.phase1.chosen_m,
        phase1_max: round12(outcome.phase1.max_prob),
        final_distribution: outcome.final_dist.iter().map(|&p| round12(p)).collect(),
    });

    let measured = measured_outcome(&outcome, cfg.measurement, cfg.seed);
    for p in 0..PARTICIPANTS {
        events.push(Event::LocalMeasure {
            participant: p as u8 + 1,
            bit: measured.bit(p),
        });
    }
    for (p, behavior) in cfg.behaviors.iter().enumerate() {
        let bit = measured.bit(p);
        let said = match behavior {
            Behavior::Honest => Some(bit),
            Behavior::Flip => Some(1 - bit),
            Behavior::Silent => None,
        };
        if let Some(bit) = said {
            events.push(Event::Report {
                participant: p as u8 + 1,
                bit,
            });
        }
    }

    let mut transcript = ProtocolTranscript {
        round,
        kind: cfg.kind,
        events,
    };
    let (verdict, reason) = dealer_verify(&transcript, cfg.marked);
    transcript.events.push(Event::Verdict { verdict, reason });
    Ok(transcript)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleEntry {
    pub kind: RoundKind,
    /// Cheat-detect code; drawn from the session seed when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub code: Option<BasisLabel>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BehaviorAssignment {
    /// 1-based position in the schedule.
    pub round: usize,
    /// 1, 2 or 3.
    pub participant: usize,
    pub behavior: Behavior,
}

/// Session configuration, also the JSON config-file schema.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionConfig {
    pub secret: String,
    #[serde(default)]
    pub seed: u64,
    /// Empty means one message round per share.
    #[serde(default)]
    pub schedule: Vec<ScheduleEntry>,
    #[serde(default)]
    pub behaviors: Vec<BehaviorAssignment>,
    #[serde(default)]
    pub measurement: MeasurementMode,
    /// Accept any 3-bit chunk as a share.
    #[serde(default)]
    pub widen_message_set: bool,
}

impl SessionConfig {
    pub fn honest(secret: &str, seed: u64) -> Self {
        Self {
            secret: secret.to_string(),
            seed,
            schedule: Vec::new(),
            behaviors: Vec::new(),
            measurement: MeasurementMode::Deterministic,
            widen_message_set: false,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn sets(&self) -> MarkedStateSets {
        if self.widen_message_set {
            MarkedStateSets::widened()
        } else {
            MarkedStateSets::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SessionResult {
    pub verdict: Verdict,
    pub recovered_secret: Option<String>,
    pub rejected_round: Option<usize>,
    pub transcripts: Vec<ProtocolTranscript>,
}

/// Runs the scheduled rounds with a fresh uniform `k` per round, stopping
/// at the first rejection.
pub fn run_session(cfg: &SessionConfig) -> Result<SessionResult> {
    let sets = cfg.sets();
    let shares = split_secret(&cfg.secret, &sets)?;
    let schedule: Vec<ScheduleEntry> = if cfg.schedule.is_empty() {
        vec![
            ScheduleEntry {
                kind: RoundKind::Message,
                code: None
            };
            shares.len()
        ]
    } else {
        cfg.schedule.clone()
    };
    let message_rounds = schedule
        .iter()
        .filter(|e| e.kind == RoundKind::Message)
        .count();
    if message_rounds != shares.len() {
        return Err(QssError::Schedule(format!(
            "{message_rounds} message rounds scheduled for {} shares",
            shares.len()
        )));
    }
    for b in &cfg.behaviors {
        if b.round == 0 || b.round > schedule.len() || !(1..=PARTICIPANTS).contains(&b.participant)
        {
            return Err(QssError::Schedule(format!(
                "behavior for round {} participant {} is out of range",
                b.round, b.participant
            )));
        }
    }

    let mut rng = rng::seeded(cfg.seed);
    let cheat_codes: Vec<BasisLabel> = sets.cheat_detect.iter().copied().collect();
    let mut shares_iter = shares.iter();
    let mut transcripts = Vec::with_capacity(schedule.len());
    let mut recovered = String::new();

    for (i, entry) in schedule.iter().enumerate() {
        let round = i + 1;
        let k = CatalogIndex::new(rng.gen_range(1..=64))?;
        let marked = match entry.kind {
            RoundKind::Message => {
                if entry.code.is_some() {
                    return Err(QssError::Schedule(format!(
                        "round {round}: message rounds take their code from the secret"
                    )));
                }
                shares_iter.next().expect("counted above").0
            }
            RoundKind::CheatDetect => match entry.code {
                Some(code) => code,
                None if cheat_codes.is_empty() => {
                    return Err(QssError::Schedule(format!(
                        "round {round}: no cheat-detect codes available"
                    )))
                }
                None => cheat_codes[rng.gen_range(0..cheat_codes.len())],
            },
        };
        let round_seed: u64 = rng.gen();
        let mut behaviors = [Behavior::Honest; PARTICIPANTS];
        for b in cfg.behaviors.iter().filter(|b| b.round == round) {
            behaviors[b.participant - 1] = b.behavior;
        }
        let rc = RoundConfig {
            k,
            marked,
            kind: entry.kind,
            behaviors,
            measurement: cfg.measurement,
            seed: round_seed,
            sets: sets.clone(),
        };
        let t = run_round(&rc, round)?;
        let verdict = t.verdict();
        if entry.kind == RoundKind::Message {
            let bits: Vec<u8> = t.reports().iter().map(|b| b.unwrap_or(0)).collect();
            recovered.push_str(&BasisLabel::from_bit_slice(&bits)?.to_string());
        }
        transcripts.push(t);
        if verdict != Some(Verdict::Accept) {
            return Ok(SessionResult {
                verdict: Verdict::Reject,
                recovered_secret: None,
                rejected_round: Some(round),
                transcripts,
            });
        }
    }
    Ok(SessionResult {
        verdict: Verdict::Accept,
        recovered_secret: Some(recovered),
        rejected_round: None,
        transcripts,
    })
}

impl SessionResult {
    pub fn render(&self, format: OutputFormat) -> Result<String> {
        let headers = ["round", "kind", "seq", "event", "detail"];
        let rows: Vec<Vec<String>> = self
            .transcripts
            .iter()
            .flat_map(|t| {
                t.events.iter().enumerate().map(move |(seq, e)| {
                    vec![
                        t.round.to_string(),
                        format!("{:?}", t.kind).to_lowercase(),
                        seq.to_string(),
                        e.name().to_string(),
                        e.detail(),
                    ]
                })
            })
            .collect();
        let summary = match (&self.recovered_secret, self.rejected_round) {
            (Some(s), _) => format!("verdict: accept, recovered secret: {s}"),
            (None, Some(r)) => format!("verdict: reject at round {r}"),
            (None, None) => "verdict: reject".to_string(),
        };
        match format {
            OutputFormat::Json => report::to_json(self),
            OutputFormat::Csv => report::csv_string(&headers, &rows),
            OutputFormat::Markdown => {
                Ok(format!("{}\n{summary}\n", markdown_table(&headers, &rows)))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(s: &str) -> BasisLabel {
        s.parse().unwrap()
    }

    fn k(i: usize) -> CatalogIndex {
        CatalogIndex::new(i).unwrap()
    }

    #[test]
    fn split_example_secret() {
        let sets = MarkedStateSets::default();
        let shares = split_secret("110011101", &sets).unwrap();
        assert_eq!(
            shares,
            vec![Share(l("110")), Share(l("011")), Share(l("101"))]
        );
        assert_eq!(split_secret("110", &sets).unwrap(), vec![Share(l("110"))]);
    }

    #[test]
    fn split_rejects_bad_secrets() {
        let sets = MarkedStateSets::default();
        match split_secret("110111101", &sets) {
            Err(QssError::ChunkNotMessage(c)) => assert_eq!(c, l("111")),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            split_secret("1101", &sets),
            Err(QssError::SecretFormat(_))
        ));
        assert!(matches!(
            split_secret("", &sets),
            Err(QssError::SecretFormat(_))
        ));
        assert!(matches!(
            split_secret("11a", &sets),
            Err(QssError::SecretFormat(_))
        ));
        assert!(split_secret("111000", &MarkedStateSets::widened()).is_ok());
    }

    #[test]
    fn honest_round_reports_marked_bits() {
        let t = run_round(&RoundConfig::honest(k(1), l("110"), RoundKind::Message), 1).unwrap();
        assert_eq!(t.reports(), [Some(1), Some(1), Some(0)]);
        assert_eq!(t.verdict(), Some(Verdict::Accept));
        assert!(t.announce_follows_acks());
        assert_eq!(
            t.events
                .iter()
                .filter(|e| matches!(e, Event::Report { .. }))
                .count(),
            3
        );
    }

    #[test]
    fn two_liars_turn_101_into_011() {
        let mut cfg = RoundConfig::honest(k(1), l("101"), RoundKind::Message);
        cfg.behaviors = [Behavior::Flip, Behavior::Flip, Behavior::Honest];
        let t = run_round(&cfg, 1).unwrap();
        assert_eq!(t.reports(), [Some(0), Some(1), Some(1)]);
        assert_eq!(t.verdict(), Some(Verdict::Reject));
        assert_eq!(
            dealer_verify(&t, l("101")).1,
            VerdictReason::Mismatch {
                reported: l("011"),
                expected: l("101")
            }
        );
    }

    #[test]
    fn cheat_round_with_111_is_clean() {
        for i in [1, 9, 40] {
            let t = run_round(
                &RoundConfig::honest(k(i), l("111"), RoundKind::CheatDetect),
                1,
            )
            .unwrap();
            assert_eq!(t.verdict(), Some(Verdict::Accept));
        }
    }

    #[test]
    fn round_kind_must_match_code() {
        assert!(run_round(&RoundConfig::honest(k(1), l("111"), RoundKind::Message), 1).is_err());
        assert!(run_round(
            &RoundConfig::honest(k(1), l("110"), RoundKind::CheatDetect),
            1
        )
        .is_err());
    }

    #[test]
    fn verify_handles_missing_reports() {
        let mut cfg = RoundConfig::honest(k(1), l("110"), RoundKind::Message);
        cfg.behaviors[2] = Behavior::Silent;
        let t = run_round(&cfg, 1).unwrap();
        assert_eq!(
            dealer_verify(&t, l("110")),
            (
                Verdict::Reject,
                VerdictReason::NoDeclaration { participant: 3 }
            )
        );
        let honest =
            run_round(&RoundConfig::honest(k(1), l("110"), RoundKind::Message), 1).unwrap();
        assert_eq!(dealer_verify(&honest, l("110")).0, Verdict::Accept);
    }

    #[test]
    fn every_honest_message_round_accepts() {
        for kk in CatalogIndex::all() {
            for m in ["110", "011", "101"] {
                let t = run_round(&RoundConfig::honest(kk, l(m), RoundKind::Message), 1).unwrap();
                assert_eq!(t.verdict(), Some(Verdict::Accept), "k={kk} m={m}");
            }
        }
    }

    #[test]
    fn single_bit_lies_always_rejected() {
        for kk in [k(1), k(23), k(64)] {
            for m in ["110", "011", "101"] {
                for p in 0..3 {
                    let mut cfg = RoundConfig::honest(kk, l(m), RoundKind::Message);
                    cfg.behaviors[p] = Behavior::Flip;
                    let t = run_round(&cfg, 1).unwrap();
                    match dealer_verify(&t, l(m)) {
                        (Verdict::Reject, VerdictReason::Mismatch { reported, .. }) => {
                            assert_eq!(reported, l(m).with_bit_flipped(p))
                        }
                        other => panic!("unexpected {other:?}"),
                    }
                }
            }
        }
    }

    #[test]
    fn honest_session_recovers_secret() {
        let r = run_session(&SessionConfig::honest("110011101", 17)).unwrap();
        assert_eq!(r.verdict, Verdict::Accept);
        assert_eq!(r.recovered_secret.as_deref(), Some("110011101"));
        assert_eq!(r.transcripts.len(), 3);
    }

    #[test]
    fn liar_in_round_two_aborts_session() {
        let mut cfg = SessionConfig::honest("110011101", 3);
        cfg.behaviors.push(BehaviorAssignment {
            round: 2,
            participant: 2,
            behavior: Behavior::Flip,
        });
        let r = run_session(&cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Reject);
        assert_eq!(r.rejected_round, Some(2));
        assert_eq!(r.recovered_secret, None);
        assert_eq!(r.transcripts.len(), 2);
    }

    #[test]
    fn interleaved_cheat_rounds() {
        let mut cfg = SessionConfig::honest("110011101", 8);
        let msg = ScheduleEntry {
            kind: RoundKind::Message,
            code: None,
        };
        let cheat = ScheduleEntry {
            kind: RoundKind::CheatDetect,
            code: None,
        };
        cfg.schedule = vec![
            cheat.clone(),
            msg.clone(),
            cheat.clone(),
            msg.clone(),
            msg,
            cheat,
        ];
        let r = run_session(&cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Accept);
        assert_eq!(r.recovered_secret.as_deref(), Some("110011101"));
        assert_eq!(r.transcripts.len(), 6);
        assert_eq!(r.transcripts[0].kind, RoundKind::CheatDetect);
    }

    #[test]
    fn schedule_validation() {
        let mut cfg = SessionConfig::honest("110011101", 8);
        cfg.schedule = vec![ScheduleEntry {
            kind: RoundKind::Message,
            code: None,
        }];
        assert!(matches!(run_session(&cfg), Err(QssError::Schedule(_))));
        let mut cfg = SessionConfig::honest("110", 8);
        cfg.behaviors.push(BehaviorAssignment {
            round: 5,
            participant: 1,
            behavior: Behavior::Flip,
        });
        assert!(matches!(run_session(&cfg), Err(QssError::Schedule(_))));
    }

    #[test]
    fn sessions_are_reproducible() {
        let mut cfg = SessionConfig::honest("110011101", 99);
        cfg.measurement = MeasurementMode::Sampled;
        assert_eq!(run_session(&cfg).unwrap(), run_session(&cfg).unwrap());
    }

    #[test]
    fn config_json_round_trip() {
        let text = r#"{"secret":"110011101","seed":4,
            "schedule":[{"kind":"cheat_detect","code":"111"},{"kind":"message"},{"kind":"message"},{"kind":"message"}],
            "behaviors":[{"round":3,"participant":1,"behavior":"silent"}],
            "measurement":"sampled"}"#;
        let cfg = SessionConfig::from_json(text).unwrap();
        assert_eq!(cfg.schedule[0].code, Some(l("111")));
        assert_eq!(cfg.behaviors[0].behavior, Behavior::Silent);
        assert_eq!(cfg.measurement, MeasurementMode::Sampled);
        assert!(SessionConfig::from_json(r#"{"secret":"110","bogus":1}"#).is_err());
    }

    #[test]
    fn transcript_json_has_stable_field_names() {
        let t = run_round(&RoundConfig::honest(k(1), l("110"), RoundKind::Message), 1).unwrap();
        let v = serde_json::to_value(&t).unwrap();
        assert_eq!(
            v["events"][0],
            serde_json::json!({"event": "prepare", "k": 1})
        );
        assert_eq!(v["events"][8]["event"], "collective_op");
        assert_eq!(v["events"][8]["M"], "110");
        assert_eq!(
            v["events"][15],
            serde_json::json!({"event": "verdict", "verdict": "accept", "reason": {"kind": "match"}})
        );
    }
}
