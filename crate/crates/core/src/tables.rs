//! Per-participant coefficient tables and the file-backed table store.
//!
//! Every participant's table maps the eight GHZ outcomes to lines, four from
//! the parallel family and four from the intersect family. All parallel-family
//! lines in a [`TableSet`] share one direction and have distinct offsets; all
//! intersect-family lines have pairwise-distinct directions, also distinct
//! from the parallel direction.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::fs;
use std::path::Path;
use std::sync::OnceLock;

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geometry::{relation, Line, LineRelation};
use crate::qstate::GhzIndex;

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_MAX_PARTICIPANTS: usize = 16;
pub const DEFAULT_COEFF_BOUND: i64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyLabel {
    #[serde(rename = "parallel")]
    ParallelFamily,
    #[serde(rename = "intersect")]
    IntersectFamily,
}

impl FamilyLabel {
    pub fn expected_relation(self) -> LineRelation {
        match self {
            FamilyLabel::ParallelFamily => LineRelation::Parallel,
            FamilyLabel::IntersectFamily => LineRelation::Intersecting,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableRow {
    pub line: Line,
    pub family: FamilyLabel,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientTable {
    participant_id: usize,
    rows: [TableRow; 8],
}

impl CoefficientTable {
    pub fn new(participant_id: usize, rows: [TableRow; 8]) -> Self {
        Self { participant_id, rows }
    }

    pub fn participant_id(&self) -> usize {
        self.participant_id
    }

    pub fn row(&self, i: GhzIndex) -> &TableRow {
        &self.rows[i.as_usize()]
    }

    pub fn rows(&self) -> impl Iterator<Item = (GhzIndex, &TableRow)> {
        GhzIndex::all().zip(self.rows.iter())
    }

    /// GHZ indices whose rows belong to `family`, ascending.
    pub fn family(&self, family: FamilyLabel) -> Vec<GhzIndex> {
        self.rows().filter(|(_, r)| r.family == family).map(|(i, _)| i).collect()
    }

    /// Replaces one row; used to build fault-injection fixtures.
    pub fn set_row(&mut self, i: GhzIndex, row: TableRow) {
        self.rows[i.as_usize()] = row;
    }
}

pub fn lookup(t: &CoefficientTable, i: GhzIndex) -> Line {
    t.row(i).line
}

#[derive(Debug, Clone)]
pub struct TableSet {
    n: usize,
    generation_seed: u64,
    tables: Vec<CoefficientTable>,
    digest: OnceLock<String>,
}

impl PartialEq for TableSet {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.generation_seed == other.generation_seed && self.tables == other.tables
    }
}

impl Eq for TableSet {}

impl TableSet {
    /// Builds a set and checks every invariant.
    pub fn new(generation_seed: u64, tables: Vec<CoefficientTable>) -> Result<Self> {
        let set = Self::new_unchecked(generation_seed, tables);
        let violations = verify_tables(&set);
        if let Some(first) = violations.first() {
            return Err(Error::TableInvariant(format!(
                "{first} ({} violation(s) total)",
                violations.len()
            )));
        }
        Ok(set)
    }

    /// Builds a set without verification, for fault-injection tests.
    pub fn new_unchecked(generation_seed: u64, tables: Vec<CoefficientTable>) -> Self {
        Self { n: tables.len(), generation_seed, tables, digest: OnceLock::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generation_seed(&self) -> u64 {
        self.generation_seed
    }

    pub fn tables(&self) -> &[CoefficientTable] {
        &self.tables
    }

    pub fn tables_mut(&mut self) -> &mut [CoefficientTable] {
        self.digest.take();
        &mut self.tables
    }

    /// Table of the `k`-th participant (0-based position).
    pub fn table(&self, k: usize) -> &CoefficientTable {
        &self.tables[k]
    }

    /// SHA-256 of the canonical file encoding, hex.
    pub fn digest(&self) -> String {
        self.digest
            .get_or_init(|| {
                let doc = to_document_string(self).expect("table set serializes");
                hex::encode(Sha256::digest(doc.as_bytes()))
            })
            .clone()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct GenerationConfig {
    pub max_participants: usize,
    /// Bound on the magnitude of every coefficient.
    pub coeff_bound: i64,
}

impl Default for GenerationConfig {
    fn default() -> Self {
        Self { max_participants: DEFAULT_MAX_PARTICIPANTS, coeff_bound: DEFAULT_COEFF_BOUND }
    }
}

pub fn generate_tables<R: Rng + ?Sized>(n: usize, seed: u64, rng: &mut R) -> Result<TableSet> {
    generate_tables_with(n, seed, &GenerationConfig::default(), rng)
}

/// Draws a table set. `seed` is recorded as the generation seed; `rng` is the
/// stream actually consumed.
pub fn generate_tables_with<R: Rng + ?Sized>(
    n: usize,
    seed: u64,
    config: &GenerationConfig,
    rng: &mut R,
) -> Result<TableSet> {
    if n < 2 || n > config.max_participants {
        return Err(Error::ParticipantCountOutOfRange { n, max: config.max_participants });
    }
    let bound = config.coeff_bound;
    let per_family = 4 * n;
    // need 4n distinct offsets and 4n + 1 distinct directions inside the box
    if bound < 2 * per_family as i64 {
        return Err(Error::BoundTooSmall(bound));
    }

    let mut seen_directions = HashSet::new();
    let parallel_dir = draw_direction(bound, &mut seen_directions, rng);
    let mut offsets = HashSet::new();
    let mut parallel_pool = Vec::with_capacity(per_family);
    while parallel_pool.len() < per_family {
        let c = rng.random_range(-bound..=bound);
        if offsets.insert(c) {
            parallel_pool.push(Line::new(parallel_dir.0, parallel_dir.1, c)?);
        }
    }
    let mut intersect_pool = Vec::with_capacity(per_family);
    while intersect_pool.len() < per_family {
        let (a, b) = draw_direction(bound, &mut seen_directions, rng);
        let c = rng.random_range(-bound..=bound);
        intersect_pool.push(Line::new(a, b, c)?);
    }

    let mut parallel_iter = parallel_pool.into_iter();
    let mut intersect_iter = intersect_pool.into_iter();
    let mut tables = Vec::with_capacity(n);
    for participant in 1..=n {
        let mut order: Vec<usize> = (0..8).collect();
        order.shuffle(rng);
        let mut families = [FamilyLabel::IntersectFamily; 8];
        for &k in &order[..4] {
            families[k] = FamilyLabel::ParallelFamily;
        }
        let rows = families.map(|family| {
            let line = match family {
                FamilyLabel::ParallelFamily => parallel_iter.next(),
                FamilyLabel::IntersectFamily => intersect_iter.next(),
            }
            .expect("pools hold exactly 4n lines each");
            TableRow { line, family }
        });
        tables.push(CoefficientTable::new(participant, rows));
    }
    Ok(TableSet::new_unchecked(seed, tables))
}

// Uniform coprime direction in the box, canonical sign, not seen before.
fn draw_direction<R: Rng + ?Sized>(
    bound: i64,
    seen: &mut HashSet<(i64, i64)>,
    rng: &mut R,
) -> (i64, i64) {
    loop {
        let a = rng.random_range(-bound..=bound);
        let b = rng.random_range(-bound..=bound);
        if a == 0 && b == 0 {
            continue;
        }
        // primitive vectors only, so each direction class is equally likely
        if a.gcd(&b) != 1 {
            continue;
        }
        let dir = Line::new(a, b, 0).expect("nonzero direction").direction();
        if seen.insert(dir) {
            return dir;
        }
    }
}

/// One failed check found by [`verify_tables`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    ParticipantCount { expected_min: usize, found: usize },
    ParticipantId { position: usize, found: usize },
    FamilySize { participant: usize, parallel: usize, intersect: usize },
    /// Two rows whose families require a relation they do not have.
    Relation {
        family: FamilyLabel,
        first: (usize, GhzIndex),
        second: (usize, GhzIndex),
        found: LineRelation,
    },
    /// Two parallel-family rows describing the same line.
    Coincident { first: (usize, GhzIndex), second: (usize, GhzIndex) },
    /// An intersect-family row parallel to the parallel-family direction.
    IntersectParallelToFamily { row: (usize, GhzIndex) },
}

impl Violation {
    /// `(participant, index)` rows named by this violation.
    pub fn rows(&self) -> Vec<(usize, GhzIndex)> {
        match *self {
            Violation::Relation { first, second, .. } | Violation::Coincident { first, second } => {
                vec![first, second]
            }
            Violation::IntersectParallelToFamily { row } => vec![row],
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ParticipantCount { expected_min, found } => {
                write!(f, "{found} participant table(s), need at least {expected_min}")
            }
            Violation::ParticipantId { position, found } => {
                write!(f, "table at position {position} has participant id {found}, expected {}", position + 1)
            }
            Violation::FamilySize { participant, parallel, intersect } => write!(
                f,
                "participant {participant} has {parallel} parallel and {intersect} intersect rows, expected 4 + 4"
            ),
            Violation::Relation { family, first, second, found } => write!(
                f,
                "{family:?} rows p{}:{} and p{}:{} are {found:?}",
                first.0, first.1, second.0, second.1
            ),
            Violation::Coincident { first, second } => write!(
                f,
                "parallel rows p{}:{} and p{}:{} coincide",
                first.0, first.1, second.0, second.1
            ),
            Violation::IntersectParallelToFamily { row } => {
                write!(f, "intersect row p{}:{} is parallel to the parallel family", row.0, row.1)
            }
        }
    }
}

/// Exhaustive pairwise check of every table invariant. An empty result means
/// the set is valid.
pub fn verify_tables(ts: &TableSet) -> Vec<Violation> {
    let mut out = Vec::new();
    if ts.tables.len() < 2 {
        out.push(Violation::ParticipantCount { expected_min: 2, found: ts.tables.len() });
    }
    for (position, t) in ts.tables.iter().enumerate() {
        if t.participant_id != position + 1 {
            out.push(Violation::ParticipantId { position, found: t.participant_id });
        }
        let parallel = t.family(FamilyLabel::ParallelFamily).len();
        if parallel != 4 {
            out.push(Violation::FamilySize {
                participant: t.participant_id,
                parallel,
                intersect: 8 - parallel,
            });
        }
    }

    let all_rows: Vec<((usize, GhzIndex), TableRow)> = ts
        .tables
        .iter()
        .flat_map(|t| t.rows().map(move |(i, r)| ((t.participant_id, i), *r)))
        .collect();
    let parallel: Vec<_> =
        all_rows.iter().filter(|(_, r)| r.family == FamilyLabel::ParallelFamily).collect();
    let intersect: Vec<_> =
        all_rows.iter().filter(|(_, r)| r.family == FamilyLabel::IntersectFamily).collect();

    for family_rows in [&parallel, &intersect] {
        for (k, (id1, r1)) in family_rows.iter().enumerate() {
            for (id2, r2) in &family_rows[k + 1..] {
                let found = relation(&r1.line, &r2.line);
                if found != r1.family.expected_relation() {
                    out.push(Violation::Relation { family: r1.family, first: *id1, second: *id2, found });
                } else if r1.family == FamilyLabel::ParallelFamily && r1.line == r2.line {
                    out.push(Violation::Coincident { first: *id1, second: *id2 });
                }
            }
        }
    }

    // With a consistent parallel direction, no intersect row may share it.
    // The majority direction is used so one rotated parallel row is not
    // mistaken for the family direction.
    let mut counts: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    for (_, r) in &parallel {
        *counts.entry(r.line.direction()).or_default() += 1;
    }
    if let Some((&dir, _)) = counts.iter().max_by_key(|(_, &c)| c) {
        let reference = Line::new(dir.0, dir.1, 0).expect("direction is nonzero");
        for (id, r) in &intersect {
            if relation(&reference, &r.line) == LineRelation::Parallel {
                out.push(Violation::IntersectParallelToFamily { row: *id });
            }
        }
    }
    out
}

// On-disk document. Field order is the serialization order.

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableSetDoc {
    schema_version: u32,
    n: usize,
    generation_seed: u64,
    tables: Vec<TableDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableDoc {
    participant_id: usize,
    rows: Vec<RowDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RowDoc {
    ghz_index: u8,
    a: i64,
    b: i64,
    c: i64,
    family: FamilyLabel,
}

fn to_doc(ts: &TableSet) -> TableSetDoc {
    TableSetDoc {
        schema_version: SCHEMA_VERSION,
        n: ts.n,
        generation_seed: ts.generation_seed,
        tables: ts
            .tables
            .iter()
            .map(|t| TableDoc {
                participant_id: t.participant_id,
                rows: t
                    .rows()
                    .map(|(i, r)| RowDoc {
                        ghz_index: i.value(),
                        a: r.line.a(),
                        b: r.line.b(),
                        c: r.line.c(),
                        family: r.family,
                    })
                    .collect(),
            })
            .collect(),
    }
}

fn from_doc(doc: TableSetDoc) -> Result<TableSet> {
    let malformed = |msg: String| Error::MalformedTableFile(msg);
    if doc.schema_version != SCHEMA_VERSION {
        return Err(malformed(format!("unsupported schema_version {}", doc.schema_version)));
    }
    if doc.tables.len() != doc.n {
        return Err(malformed(format!("n = {} but {} tables present", doc.n, doc.tables.len())));
    }
    let mut tables = Vec::with_capacity(doc.n);
    for t in doc.tables {
        if t.rows.len() != 8 {
            return Err(malformed(format!(
                "participant {} has {} rows, expected 8",
                t.participant_id,
                t.rows.len()
            )));
        }
        let mut rows = Vec::with_capacity(8);
        for (expected, r) in t.rows.into_iter().enumerate() {
            if r.ghz_index as usize != expected {
                return Err(malformed(format!(
                    "participant {}: row {expected} has ghz_index {}",
                    t.participant_id, r.ghz_index
                )));
            }
            let line = Line::from_canonical(r.a, r.b, r.c).map_err(|e| {
                Error::TableInvariant(format!("participant {} row {expected}: {e}", t.participant_id))
            })?;
            rows.push(TableRow { line, family: r.family });
        }
        let rows: [TableRow; 8] = rows.try_into().expect("length checked above");
        tables.push(CoefficientTable::new(t.participant_id, rows));
    }
    TableSet::new(doc.generation_seed, tables)
}

/// Canonical text encoding of a table set.
pub fn to_document_string(ts: &TableSet) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&to_doc(ts))?;
    s.push('\n');
    Ok(s)
}

pub fn from_document_str(s: &str) -> Result<TableSet> {
    let doc: TableSetDoc =
        serde_json::from_str(s).map_err(|e| Error::MalformedTableFile(e.to_string()))?;
    from_doc(doc)
}

pub fn save_tables(ts: &TableSet, path: impl AsRef<Path>) -> Result<()> {
    let violations = verify_tables(ts);
    if let Some(v) = violations.first() {
        return Err(Error::TableInvariant(v.to_string()));
    }
    fs::write(path, to_document_string(ts)?)?;
    Ok(())
}

pub fn load_tables(path: impl AsRef<Path>) -> Result<TableSet> {
    from_document_str(&fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    fn gen(n: usize, seed: u64) -> TableSet {
        generate_tables(n, seed, &mut rng::from_seed(seed)).unwrap()
    }

    #[test]
    fn n2_family_relations() {
        for seed in 0..20 {
            let ts = gen(2, seed);
            let (t1, t2) = (ts.table(0), ts.table(1));
            for family in [FamilyLabel::ParallelFamily, FamilyLabel::IntersectFamily] {
                for i in t1.family(family) {
                    for j in t2.family(family) {
                        assert_eq!(
                            relation(&lookup(t1, i), &lookup(t2, j)),
                            family.expected_relation()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn generated_sets_verify() {
        for seed in 0..100 {
            assert!(verify_tables(&gen(8, seed)).is_empty(), "seed {seed}");
        }
    }

    #[test]
    fn coefficients_bounded() {
        let config = GenerationConfig { max_participants: 16, coeff_bound: 1000 };
        let ts = generate_tables_with(16, 5, &config, &mut rng::from_seed(5)).unwrap();
        assert!(verify_tables(&ts).is_empty());
        for t in ts.tables() {
            for (_, r) in t.rows() {
                let l = r.line;
                assert!(l.a().abs() <= 1000 && l.b().abs() <= 1000 && l.c().abs() <= 1000);
            }
        }
    }

    #[test]
    fn n_out_of_range() {
        let mut r = rng::from_seed(0);
        assert!(matches!(generate_tables(1, 0, &mut r), Err(Error::ParticipantCountOutOfRange { .. })));
        assert!(matches!(generate_tables(17, 0, &mut r), Err(Error::ParticipantCountOutOfRange { .. })));
        let tiny = GenerationConfig { max_participants: 16, coeff_bound: 3 };
        assert!(matches!(generate_tables_with(4, 0, &tiny, &mut r), Err(Error::BoundTooSmall(3))));
    }

    #[test]
    fn deterministic_generation() {
        assert_eq!(gen(5, 77), gen(5, 77));
        assert_ne!(gen(5, 77), gen(5, 78));
    }

    #[test]
    fn rotated_parallel_row_is_attributed() {
        let mut ts = gen(3, 4);
        let target = (2, ts.table(1).family(FamilyLabel::ParallelFamily)[1]);
        let old = lookup(ts.table(1), target.1);
        let rotated = Line::new(old.b(), -old.a(), old.c()).unwrap();
        ts.tables_mut()[1].set_row(target.1, TableRow { line: rotated, family: FamilyLabel::ParallelFamily });
        let violations = verify_tables(&ts);
        // one violation against each of the other 4n − 1 parallel rows
        assert_eq!(violations.len(), 11);
        for v in &violations {
            assert!(v.rows().contains(&target), "{v}");
        }
    }

    #[test]
    fn coincident_rows_detected() {
        let mut ts = gen(2, 9);
        let src = ts.table(0).family(FamilyLabel::ParallelFamily)[0];
        let dst = ts.table(1).family(FamilyLabel::ParallelFamily)[2];
        let line = lookup(ts.table(0), src);
        ts.tables_mut()[1].set_row(dst, TableRow { line, family: FamilyLabel::ParallelFamily });
        let violations = verify_tables(&ts);
        assert_eq!(violations, vec![Violation::Coincident { first: (1, src), second: (2, dst) }]);
    }

    #[test]
    fn document_round_trip_and_rejections() {
        let ts = gen(4, 12);
        let doc = to_document_string(&ts).unwrap();
        let back = from_document_str(&doc).unwrap();
        assert_eq!(back, ts);
        assert_eq!(to_document_string(&back).unwrap(), doc);
        assert!(!doc.contains('.'), "no floating point in table files");

        let mut v: serde_json::Value = serde_json::from_str(&doc).unwrap();
        v["tables"][0]["rows"][3]["a"] = 0.into();
        v["tables"][0]["rows"][3]["b"] = 0.into();
        let err = from_document_str(&v.to_string()).unwrap_err();
        assert!(matches!(err, Error::TableInvariant(_)), "{err}");

        let mut v: serde_json::Value = serde_json::from_str(&doc).unwrap();
        v["tables"][1]["rows"].as_array_mut().unwrap().pop();
        let err = from_document_str(&v.to_string()).unwrap_err();
        assert!(matches!(err, Error::MalformedTableFile(_)), "{err}");

        assert!(matches!(from_document_str("{ not json"), Err(Error::MalformedTableFile(_))));
    }
}
