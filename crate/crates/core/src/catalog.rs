//! The 64 initial states, the message / cheat-detect code split, and the
//! decode tables derived from them.
//!
//! The catalog order is irregular, so it is embedded verbatim from
//! `data/catalog.txt` rather than generated. Reference copies of the
//! reference decode tables live next to it and are only ever diffed
//! against, never trusted.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{QssError, Result};
use crate::grover::{self, argmax_set};
use crate::report::round3;
use crate::statevec::{eigen_vector, tensor, BasisLabel, EigenAxis, StateVector};

pub const CATALOG_SIZE: usize = 64;

pub const CATALOG_DATA: &str = include_str!("../data/catalog.txt");
pub const REFERENCE_TABLE1_DATA: &str = include_str!("../data/reference_table1.txt");
pub const REFERENCE_TABLE2_DATA: &str = include_str!("../data/reference_table2.txt");
pub const TABLE1_OVERRIDES_DATA: &str = include_str!("../data/table1_overrides.txt");

/// Catalog position `k`, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct CatalogIndex(u8);

impl CatalogIndex {
    pub fn new(k: usize) -> Result<Self> {
        if (1..=CATALOG_SIZE).contains(&k) {
            Ok(Self(k as u8))
        } else {
            Err(QssError::CatalogIndex(k))
        }
    }

    pub fn get(self) -> usize {
        self.0 as usize
    }

    pub fn all() -> impl Iterator<Item = CatalogIndex> {
        (1..=CATALOG_SIZE as u8).map(CatalogIndex)
    }
}

impl TryFrom<usize> for CatalogIndex {
    type Error = QssError;

    fn try_from(k: usize) -> Result<Self> {
        Self::new(k)
    }
}

impl From<CatalogIndex> for usize {
    fn from(k: CatalogIndex) -> usize {
        k.get()
    }
}

impl fmt::Display for CatalogIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InitialStateSpec {
    pub k: CatalogIndex,
    pub axes: [EigenAxis; 3],
}

impl fmt::Display for InitialStateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in self.axes {
            write!(f, "|{a}>")?;
        }
        Ok(())
    }
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_err(what: &'static str, line: usize, msg: impl Into<String>) -> QssError {
    QssError::Parse {
        what,
        line,
        msg: msg.into(),
    }
}

/// Parses catalog text: one `k axis1 axis2 axis3` line per entry, in order.
pub fn parse_catalog(text: &str) -> Result<Vec<InitialStateSpec>> {
    let mut out = Vec::with_capacity(CATALOG_SIZE);
    for (line, content) in data_lines(text) {
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(parse_err("catalog", line, "expected `k axis axis axis`"));
        }
        let k: usize = fields[0]
            .parse()
            .map_err(|_| parse_err("catalog", line, format!("bad index `{}`", fields[0])))?;
        if k != out.len() + 1 {
            return Err(parse_err(
                "catalog",
                line,
                format!("expected k = {}", out.len() + 1),
            ));
        }
        let mut axes = [EigenAxis::Plus; 3];
        for (slot, f) in axes.iter_mut().zip(&fields[1..]) {
            *slot = f.parse()?;
        }
        out.push(InitialStateSpec {
            k: CatalogIndex::new(k)?,
            axes,
        });
    }
    if out.len() != CATALOG_SIZE {
        return Err(parse_err(
            "catalog",
            0,
            format!("{} entries, expected 64", out.len()),
        ));
    }
    Ok(out)
}

pub fn catalog() -> &'static [InitialStateSpec] {
    static CATALOG: OnceLock<Vec<InitialStateSpec>> = OnceLock::new();
    CATALOG.get_or_init(|| parse_catalog(CATALOG_DATA).expect("embedded catalog is well formed"))
}

pub fn catalog_entry(k: usize) -> Result<InitialStateSpec> {
    Ok(catalog()[CatalogIndex::new(k)?.get() - 1])
}

/// `|a1> (x) |a2> (x) |a3>`.
pub fn build_state(spec: &InitialStateSpec) -> StateVector {
    let [a, b, c] = spec.axes.map(eigen_vector);
    let ab = tensor(&a, &b).expect("2 qubits");
    tensor(&ab, &c).expect("3 qubits")
}

pub fn initial_state(k: CatalogIndex) -> StateVector {
    build_state(&catalog()[k.get() - 1])
}

/// Split of the eight 3-bit labels into share codes and cheat-detect codes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkedStateSets {
    pub message: BTreeSet<BasisLabel>,
    pub cheat_detect: BTreeSet<BasisLabel>,
}

impl Default for MarkedStateSets {
    fn default() -> Self {
        Self::with_message(["110", "011", "101"].map(|s| s.parse().expect("label")))
            .expect("default message codes are valid")
    }
}

impl MarkedStateSets {
    /// Builds the partition from a set of message codes; the remaining
    /// labels become cheat-detect codes.
    pub fn with_message(message: impl IntoIterator<Item = BasisLabel>) -> Result<Self> {
        let message: BTreeSet<BasisLabel> = message.into_iter().collect();
        if let Some(bad) = message.iter().find(|l| l.num_qubits() != 3) {
            return Err(QssError::InvalidLabel(bad.to_string()));
        }
        let cheat_detect = BasisLabel::all(3)
            .filter(|l| !message.contains(l))
            .collect();
        Ok(Self {
            message,
            cheat_detect,
        })
    }

    /// Every label treated as a message code.
    pub fn widened() -> Self {
        Self::with_message(BasisLabel::all(3)).expect("3-qubit labels")
    }

    pub fn is_message(&self, l: BasisLabel) -> bool {
        self.message.contains(&l)
    }

    pub fn is_cheat_detect(&self, l: BasisLabel) -> bool {
        self.cheat_detect.contains(&l)
    }
}

/// Per-row marked-state choices that replace the default tie-break.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TieOverrides(pub BTreeMap<CatalogIndex, BasisLabel>);

impl TieOverrides {
    /// `k M` per line, `#` comments allowed.
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (line, content) in data_lines(text) {
            let mut it = content.split_whitespace();
            let (Some(k), Some(m), None) = (it.next(), it.next(), it.next()) else {
                return Err(parse_err("overrides", line, "expected `k M`"));
            };
            let k: usize = k
                .parse()
                .map_err(|_| parse_err("overrides", line, format!("bad index `{k}`")))?;
            map.insert(CatalogIndex::new(k)?, m.parse()?);
        }
        Ok(Self(map))
    }

    /// Choices that reproduce the reference table's tie resolution for
    /// `encode(S_1, 110)`.
    pub fn reference() -> Self {
        Self::parse(TABLE1_OVERRIDES_DATA).expect("embedded overrides are well formed")
    }

    pub fn get(&self, k: CatalogIndex) -> Option<BasisLabel> {
        self.0.get(&k).copied()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub k: CatalogIndex,
    pub phase1_outcomes: Vec<BasisLabel>,
    pub phase1_prob: Option<f64>,
    pub chosen_m: BasisLabel,
    pub final_outcomes: Vec<BasisLabel>,
    pub final_prob: f64,
}

fn encoded_state(enc_k: CatalogIndex, m: BasisLabel) -> Result<StateVector> {
    grover::encode(&initial_state(enc_k), m)
}

/// For every decode index `k`: phase 1 with `S_k`, then phase 2 with the
/// row's chosen `M`.
pub fn generate_table1(
    enc_k: CatalogIndex,
    m: BasisLabel,
    overrides: &TieOverrides,
) -> Result<Vec<TableRow>> {
    let encoded = encoded_state(enc_k, m)?;
    CatalogIndex::all()
        .map(|k| {
            let out = grover::collective_op_with(&encoded, &initial_state(k), overrides.get(k))?;
            let (final_outcomes, final_prob) = out.final_top();
            Ok(TableRow {
                k,
                phase1_outcomes: out.phase1.argmax_set,
                phase1_prob: Some(out.phase1.max_prob),
                chosen_m: out.phase1.chosen_m,
                final_outcomes,
                final_prob,
            })
        })
        .collect()
}

/// For every `k`: the full decode with `M` forced.
pub fn generate_table2(
    enc_k: CatalogIndex,
    m: BasisLabel,
    forced_m: BasisLabel,
) -> Result<Vec<TableRow>> {
    let encoded = encoded_state(enc_k, m)?;
    CatalogIndex::all()
        .map(|k| {
            let s_k = initial_state(k);
            let after = grover::diffusion_apply(&encoded, &s_k)?;
            let (state, dist) = grover::decode_phase2(&after, forced_m, &s_k)?;
            let (final_outcomes, final_prob) = argmax_set(&dist, state.num_qubits());
            Ok(TableRow {
                k,
                phase1_outcomes: Vec::new(),
                phase1_prob: None,
                chosen_m: forced_m,
                final_outcomes,
                final_prob,
            })
        })
        .collect()
}

fn parse_label_list(s: &str) -> Result<Vec<BasisLabel>> {
    let mut v = s
        .split(',')
        .map(|x| x.trim().parse())
        .collect::<Result<Vec<BasisLabel>>>()?;
    v.sort();
    Ok(v)
}

fn parse_prob(s: &str, line: usize) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| parse_err("reference table", line, format!("bad probability `{s}`")))
}

/// Reference decode table for `encode(S_1, 110)` with tie-resolved `M`.
pub fn reference_table1() -> Result<Vec<TableRow>> {
    data_lines(REFERENCE_TABLE1_DATA)
        .map(|(line, content)| {
            let f: Vec<&str> = content.split('|').map(str::trim).collect();
            if f.len() != 6 {
                return Err(parse_err("reference table 1", line, "expected 6 fields"));
            }
            Ok(TableRow {
                k: CatalogIndex::new(
                    f[0].parse()
                        .map_err(|_| parse_err("reference table 1", line, "bad k"))?,
                )?,
                phase1_outcomes: parse_label_list(f[1])?,
                phase1_prob: Some(parse_prob(f[2], line)?),
                chosen_m: f[3].parse()?,
                final_outcomes: parse_label_list(f[4])?,
                final_prob: parse_prob(f[5], line)?,
            })
        })
        .collect()
}

/// Reference decode table for `encode(S_1, 110)` with `M = 110` forced.
pub fn reference_table2() -> Result<Vec<TableRow>> {
    let forced: BasisLabel = "110".parse()?;
    data_lines(REFERENCE_TABLE2_DATA)
        .map(|(line, content)| {
            let f: Vec<&str> = content.split('|').map(str::trim).collect();
            if f.len() != 3 {
                return Err(parse_err("reference table 2", line, "expected 3 fields"));
            }
            Ok(TableRow {
                k: CatalogIndex::new(
                    f[0].parse()
                        .map_err(|_| parse_err("reference table 2", line, "bad k"))?,
                )?,
                phase1_outcomes: Vec::new(),
                phase1_prob: None,
                chosen_m: forced,
                final_outcomes: parse_label_list(f[1])?,
                final_prob: parse_prob(f[2], line)?,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldDiff {
    pub field: &'static str,
    pub computed: String,
    pub reference: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowDiff {
    pub k: CatalogIndex,
    pub fields: Vec<FieldDiff>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TableDiff {
    pub rows: Vec<RowDiff>,
}

impl TableDiff {
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, k: usize) -> Option<&RowDiff> {
        self.rows.iter().find(|r| r.k.get() == k)
    }
}

impl fmt::Display for TableDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows.is_empty() {
            return writeln!(f, "table diff: no differences");
        }
        writeln!(f, "table diff: {} row(s) differ", self.rows.len())?;
        for row in &self.rows {
            for d in &row.fields {
                writeln!(
                    f,
                    "  k={:<2} {:<16} computed {:<24} reference {}",
                    row.k, d.field, d.computed, d.reference
                )?;
            }
        }
        Ok(())
    }
}

fn render_set(v: &[BasisLabel]) -> String {
    grover::join_labels(v)
}

fn render_opt_prob(p: Option<f64>) -> String {
    p.map(round3).unwrap_or_default()
}

/// Row-by-row comparison of outcome sets, `M`, and 3-decimal probabilities.
pub fn diff_table(computed: &[TableRow], reference: &[TableRow]) -> Result<TableDiff> {
    if computed.len() != reference.len() {
        return Err(QssError::TableLength {
            computed: computed.len(),
            reference: reference.len(),
        });
    }
    let mut rows = Vec::new();
    for (c, r) in computed.iter().zip(reference) {
        let mut fields = Vec::new();
        let mut check = |field: &'static str, a: String, b: String| {
            if a != b {
                fields.push(FieldDiff {
                    field,
                    computed: a,
                    reference: b,
                });
            }
        };
        check("k", c.k.to_string(), r.k.to_string());
        check(
            "phase1_outcomes",
            render_set(&c.phase1_outcomes),
            render_set(&r.phase1_outcomes),
        );
        check(
            "phase1_p",
            render_opt_prob(c.phase1_prob),
            render_opt_prob(r.phase1_prob),
        );
        check("M", c.chosen_m.to_string(), r.chosen_m.to_string());
        check(
            "final_outcomes",
            render_set(&c.final_outcomes),
            render_set(&r.final_outcomes),
        );
        check("final_p", round3(c.final_prob), round3(r.final_prob));
        if !fields.is_empty() {
            rows.push(RowDiff { k: c.k, fields });
        }
    }
    Ok(TableDiff { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevec::{C64, TOLERANCE};
    use EigenAxis::*;

    fn l(s: &str) -> BasisLabel {
        s.parse().unwrap()
    }

    fn k(i: usize) -> CatalogIndex {
        CatalogIndex::new(i).unwrap()
    }

    #[test]
    fn catalog_spot_entries() {
        assert_eq!(catalog_entry(1).unwrap().axes, [Plus, Plus, Plus]);
        assert_eq!(catalog_entry(9).unwrap().axes, [PlusI, PlusI, PlusI]);
        assert_eq!(catalog_entry(17).unwrap().axes, [Plus, Plus, PlusI]);
        assert_eq!(catalog_entry(51).unwrap().axes, [Plus, MinusI, MinusI]);
        assert_eq!(catalog_entry(64).unwrap().axes, [MinusI, Minus, MinusI]);
        assert!(matches!(catalog_entry(0), Err(QssError::CatalogIndex(0))));
        assert!(matches!(catalog_entry(65), Err(QssError::CatalogIndex(65))));
    }

    #[test]
    fn catalog_covers_all_axis_triples() {
        let distinct: BTreeSet<[EigenAxis; 3]> = catalog().iter().map(|s| s.axes).collect();
        assert_eq!(distinct.len(), 64);
    }

    #[test]
    fn built_states_are_pairwise_distinct_and_normalized() {
        let states: Vec<StateVector> = CatalogIndex::all().map(initial_state).collect();
        for (i, a) in states.iter().enumerate() {
            assert!((a.norm_sqr() - 1.0).abs() <= TOLERANCE);
            for b in &states[i + 1..] {
                assert!(!a.approx_eq(b, 1e-9));
            }
        }
    }

    #[test]
    fn s1_uniform_and_s9_powers_of_i() {
        let r = 1.0 / 8f64.sqrt();
        let s1 = initial_state(k(1));
        assert!(s1
            .amplitudes()
            .iter()
            .all(|a| (a - C64::new(r, 0.0)).norm() <= TOLERANCE));
        let s9 = initial_state(k(9));
        for (idx, a) in s9.amplitudes().iter().enumerate() {
            let want = C64::new(0.0, 1.0).powi(idx.count_ones() as i32) * r;
            assert!((a - want).norm() <= TOLERANCE);
        }
    }

    #[test]
    fn catalog_parser_rejects_bad_input() {
        assert!(parse_catalog("1 + + +\n").is_err());
        assert!(parse_catalog("2 + + +\n").is_err());
        assert!(matches!(
            parse_catalog("1 + x +\n"),
            Err(QssError::InvalidAxis(_))
        ));
    }

    #[test]
    fn marked_sets_partition_labels() {
        let sets = MarkedStateSets::default();
        assert_eq!(sets.message.len(), 3);
        assert_eq!(
            sets.cheat_detect,
            ["000", "001", "010", "100", "111"].map(l).into()
        );
        assert!(sets.message.is_disjoint(&sets.cheat_detect));
        let union: BTreeSet<_> = sets.message.union(&sets.cheat_detect).copied().collect();
        assert_eq!(union.len(), 8);
        assert!(MarkedStateSets::widened().cheat_detect.is_empty());
    }

    #[test]
    fn table1_spot_rows() {
        let rows = generate_table1(k(1), l("110"), &TieOverrides::default()).unwrap();
        let r1 = &rows[0];
        assert_eq!(r1.phase1_outcomes, vec![l("110")]);
        assert_eq!(round3(r1.phase1_prob.unwrap()), "0.781");
        assert_eq!(r1.chosen_m, l("110"));
        assert_eq!(r1.final_outcomes, vec![l("110")]);
        assert_eq!(round3(r1.final_prob), "0.945");
        let r10 = &rows[9];
        assert_eq!(r10.phase1_outcomes, vec![l("001")]);
        assert_eq!(round3(r10.phase1_prob.unwrap()), "0.406");
        assert_eq!(r10.final_outcomes, vec![l("001")]);
        assert_eq!(round3(r10.final_prob), "0.477");
    }

    #[test]
    fn table1_matching_row_is_near_certain() {
        for enc in [1, 9, 33, 64] {
            for m in ["110", "011", "101"] {
                let rows = generate_table1(k(enc), l(m), &TieOverrides::default()).unwrap();
                let row = &rows[enc - 1];
                assert_eq!(row.final_outcomes, vec![l(m)]);
                assert!(row.final_prob > 0.9);
            }
        }
    }

    #[test]
    fn table2_spot_rows() {
        let rows = generate_table2(k(1), l("110"), l("110")).unwrap();
        assert_eq!(rows[0].final_outcomes, vec![l("110")]);
        assert_eq!(round3(rows[0].final_prob), "0.945");
        for i in [9, 16] {
            assert_eq!(rows[i - 1].final_outcomes, vec![l("000")]);
            assert_eq!(round3(rows[i - 1].final_prob), "0.289");
        }
    }

    #[test]
    fn overrides_parse_and_apply() {
        let o = TieOverrides::reference();
        assert_eq!(o.get(k(7)), Some(l("001")));
        assert_eq!(o.get(k(8)), Some(l("011")));
        assert_eq!(o.get(k(1)), None);
        assert!(TieOverrides::parse("7\n").is_err());
        let rows = generate_table1(k(1), l("110"), &o).unwrap();
        assert_eq!(rows[6].chosen_m, l("001"));
        assert_eq!(rows[6].final_outcomes, vec![l("000"), l("111")]);
    }

    #[test]
    fn diff_identical_and_perturbed() {
        let rows = generate_table2(k(1), l("110"), l("110")).unwrap();
        assert!(diff_table(&rows, &rows).unwrap().is_empty());
        let mut bent = rows.clone();
        bent[4].final_prob += 0.01;
        let d = diff_table(&bent, &rows).unwrap();
        assert_eq!(d.rows.len(), 1);
        assert_eq!(d.rows[0].k, k(5));
        assert_eq!(d.rows[0].fields.len(), 1);
        assert_eq!(d.rows[0].fields[0].field, "final_p");
        assert!(matches!(
            diff_table(&rows[..3], &rows),
            Err(QssError::TableLength { .. })
        ));
    }

    #[test]
    fn reference_tables_load() {
        let t1 = reference_table1().unwrap();
        let t2 = reference_table2().unwrap();
        assert_eq!(t1.len(), 64);
        assert_eq!(t2.len(), 64);
        assert_eq!(t1[6].chosen_m, l("001"));
        assert_eq!(t2[45].final_outcomes, vec![l("011"), l("101")]);
    }
}
