mod common;

use geoqss::geometry::{relation, LineRelation};
use geoqss::rng;
use geoqss::tables::{
    generate_tables, load_tables, lookup, save_tables, to_document_string, verify_tables, FamilyLabel, TableSet,
};
use geoqss::GhzIndex;
use rand::Rng;

fn gen(n: usize, seed: u64) -> TableSet {
    generate_tables(n, seed, &mut rng::from_seed(seed)).unwrap()
}

fn pairwise(ts: &TableSet, choice: &[GhzIndex], expected: LineRelation) -> bool {
    let lines: Vec<_> = choice.iter().zip(ts.tables()).map(|(&i, t)| lookup(t, i)).collect();
    (0..lines.len()).all(|i| (i + 1..lines.len()).all(|j| relation(&lines[i], &lines[j]) == expected))
}

#[test]
fn feasibility_exhaustive_small_n() {
    for n in 2..=4 {
        for seed in 0..3 {
            let ts = gen(n, seed);
            for family in [FamilyLabel::ParallelFamily, FamilyLabel::IntersectFamily] {
                let fams: Vec<Vec<GhzIndex>> = ts.tables().iter().map(|t| t.family(family)).collect();
                for sel in 0..4usize.pow(n as u32) {
                    let choice: Vec<GhzIndex> =
                        (0..n).map(|p| fams[p][(sel / 4usize.pow(p as u32)) % 4]).collect();
                    assert!(pairwise(&ts, &choice, family.expected_relation()));
                }
            }
        }
    }
}

#[test]
fn feasibility_sampled_large_n() {
    let mut r = rng::from_seed(1234);
    for n in 5..=16 {
        let ts = gen(n, n as u64);
        for _ in 0..200 {
            for family in [FamilyLabel::ParallelFamily, FamilyLabel::IntersectFamily] {
                let choice: Vec<GhzIndex> =
                    ts.tables().iter().map(|t| t.family(family)[r.random_range(0..4)]).collect();
                assert!(pairwise(&ts, &choice, family.expected_relation()));
            }
        }
    }
}

#[test]
fn family_assignment_uniform() {
    let seeds = 4000u64;
    let mut counts = [0u64; 8];
    let mut total = 0u64;
    for seed in 0..seeds {
        let ts = gen(2, seed);
        for t in ts.tables() {
            for i in t.family(FamilyLabel::ParallelFamily) {
                counts[i.as_usize()] += 1;
            }
            total += 1;
        }
    }
    for (i, &c) in counts.iter().enumerate() {
        assert!(common::within_3_sigma(c, total, 0.5), "index {i}: {c}/{total}");
    }
}

#[test]
fn determinism() {
    for n in [2, 5, 9] {
        assert_eq!(to_document_string(&gen(n, 31)).unwrap(), to_document_string(&gen(n, 31)).unwrap());
    }
}

#[test]
fn save_load_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let ts = gen(4, 8);
    let p1 = dir.path().join("a.json");
    let p2 = dir.path().join("b.json");
    save_tables(&ts, &p1).unwrap();
    let loaded = load_tables(&p1).unwrap();
    assert_eq!(loaded, ts);
    save_tables(&loaded, &p2).unwrap();
    assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
    assert_eq!(loaded.digest(), ts.digest());
    for (t, u) in ts.tables().iter().zip(loaded.tables()) {
        for i in GhzIndex::all() {
            assert_eq!(lookup(t, i), lookup(u, i));
            assert_eq!(lookup(t, i), lookup(t, i));
            let l = lookup(t, i);
            assert!(l.a() != 0 || l.b() != 0);
        }
    }
}

#[test]
fn load_rejects_missing_file_and_wrong_schema() {
    let dir = tempfile::tempdir().unwrap();
    assert!(load_tables(dir.path().join("missing.json")).is_err());
    let doc = to_document_string(&gen(2, 1)).unwrap().replace("\"schema_version\": 1", "\"schema_version\": 9");
    let p = dir.path().join("v9.json");
    std::fs::write(&p, doc).unwrap();
    assert!(load_tables(&p).is_err());
}

#[test]
fn hundred_random_sets_verify() {
    let mut r = rng::from_seed(99);
    for _ in 0..100 {
        let n = r.random_range(2..=8);
        let seed = r.random::<u64>();
        assert!(verify_tables(&gen(n, seed)).is_empty());
    }
}
