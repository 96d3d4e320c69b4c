mod common;

use common::*;
use pbwt::pdict::PDictIndex;
use pbwt::{AlphabetSpec, Error, Mode};
use pbwt_oracle::{self as oracle, OracleTrie};
use rand::seq::SliceRandom;
use rand::Rng;

fn example_spec() -> AlphabetSpec {
    AlphabetSpec::new(&['A', 'B', 'C'], &['w', 'x', 'y', 'z'], &[]).unwrap()
}

/// Structural checks of one automaton against materialized encodings.
fn check_structure(d: &PDictIndex, patterns: &[Vec<u32>], spec: &AlphabetSpec) {
    let a = alpha(spec);
    let trie = d.trie();
    let ot = OracleTrie::new(patterns, &a);
    assert_eq!(d.state_count(), ot.states.len());
    let sp = spec.sigma_p();
    // state of every encoded path
    let mut by_path = std::collections::HashMap::new();
    for u in trie.preorder() {
        let path = d.path(u);
        let enc = oracle::prev(&path, &a);
        // rewritten labels spell a string with the original encoding
        assert!(ot.index.contains_key(&enc));
        // fresh symbols are numbered by first appearance
        assert_eq!(oracle::decode_prev(&enc), path);
        assert_eq!(d.depth(u), path.len());
        by_path.insert(enc, u);
    }
    // labels are ranks of the reversed encodings
    let mut revs: Vec<(Vec<i64>, usize)> =
        trie.preorder().map(|u| (oracle::reverse_prev(&oracle::prev(&d.path(u), &a), &a), d.label(u))).collect();
    revs.sort();
    for (r, (_, lab)) in revs.iter().enumerate() {
        assert_eq!(*lab, r + 1);
    }
    assert_eq!(d.label(d.root()), 1);
    for u in trie.preorder() {
        let kids: Vec<_> = trie.children(u).collect();
        // children distinct in Z and stored in reversed-encoding order
        let zs: Vec<u32> = kids.iter().map(|&c| d.z_value(c).unwrap()).collect();
        let mut dedup = zs.clone();
        dedup.sort_unstable();
        dedup.dedup();
        assert_eq!(dedup.len(), zs.len());
        for w in kids.windows(2) {
            assert!(d.label(w[0]) < d.label(w[1]));
        }
        // Z definition on the rewritten path
        let path = d.path(u);
        for (&c, &z) in kids.iter().zip(&zs) {
            let lab = d.edge_label(c);
            let want = if lab > sp {
                lab
            } else {
                let rev: Vec<u32> = path.iter().rev().copied().collect();
                let f = rev.iter().position(|&x| x == lab).map_or(rev.len(), |f| f + 1);
                let mut distinct: Vec<u32> = rev[..f].iter().copied().filter(|&x| x <= sp).collect();
                distinct.sort_unstable();
                distinct.dedup();
                if rev.contains(&lab) {
                    distinct.len() as u32
                } else {
                    distinct.len() as u32 + 1
                }
            };
            assert_eq!(z, want);
            assert_eq!(d.next(u, z), Some(c));
        }
        for z in 1..=spec.sigma() {
            if !zs.contains(&z) {
                assert_eq!(d.next(u, z), None);
            }
        }
        // failure and report links
        let enc = oracle::prev(&d.path(u), &a);
        let f = ot.failure(ot.index[&enc]);
        assert_eq!(d.failure(u), by_path[&ot.states[f]]);
        let mut r = ot.failure(ot.index[&enc]);
        while r != 0 && !patterns.iter().any(|p| oracle::prev(p, &a) == ot.states[r]) {
            r = ot.failure(r);
        }
        assert_eq!(d.report(u), by_path[&ot.states[r]]);
    }
    assert_eq!(d.failure(d.root()), d.root());
    assert_eq!(d.report(d.root()), d.root());
    for (i, p) in patterns.iter().enumerate() {
        let u = by_path[&oracle::prev(p, &a)];
        assert_eq!(d.pattern_of(u), Some(i + 1));
    }
}

#[test]
fn dictionary_example() {
    let spec = example_spec();
    let p = spec.encode_text("AxByCx", Mode::Query).unwrap();
    let t = spec.encode_text("AyBxCyAwBxCzxyAzBwCz", Mode::Query).unwrap();
    let d = PDictIndex::build(&[p], &spec).unwrap();
    assert_eq!(d.scan(&t).unwrap(), vec![(6, 1), (20, 1)]);
}

#[test]
fn small_cases() {
    let spec = example_spec();
    let enc = |s: &str| spec.encode_text(s, Mode::Query).unwrap();
    let d = PDictIndex::build(&[enc("x")], &spec).unwrap();
    assert!(d.scan(&enc("ABC")).unwrap().is_empty());
    assert!(d.scan(&[]).unwrap().is_empty());

    let d = PDictIndex::build(&[enc("xy")], &spec).unwrap();
    assert_eq!(d.state_count(), 3);
    // the shifted path of "xy" is the encoding of "y", the state for "x"
    let leaf = d.trie().leaf_select(1);
    assert_eq!(d.depth(d.failure(leaf)), 1);
    let mid = d.trie().parent(leaf).unwrap();
    assert_eq!(d.failure(mid), d.root());
    let d = PDictIndex::build(&[enc("xx"), enc("xy")], &spec).unwrap();
    check_structure(&d, &[enc("xx"), enc("xy")], &spec);
    // the state for "xy" fails to the state for "x"
    let xy = d.trie().preorder().find(|&u| d.pattern_of(u) == Some(2)).unwrap();
    assert_eq!(d.depth(d.failure(xy)), 1);
    // a static path keeps its labels
    let d = PDictIndex::build(&[enc("ABC")], &spec).unwrap();
    let leaf = d.trie().leaf_select(1);
    assert_eq!(d.path(leaf), enc("ABC"));
}

#[test]
fn build_errors() {
    let spec = example_spec();
    let enc = |s: &str| spec.encode_text(s, Mode::Query).unwrap();
    assert_eq!(PDictIndex::build(&[], &spec).unwrap_err(), Error::EmptyDictionary);
    assert_eq!(PDictIndex::build(&[enc("xAy"), enc("zAw")], &spec).unwrap_err(), Error::DuplicatePattern(1, 2));
    assert_eq!(PDictIndex::build(&[enc("x"), vec![]], &spec).unwrap_err(), Error::EmptyPattern(2));
    let d = PDictIndex::build(&[enc("x")], &spec).unwrap();
    assert_eq!(d.scan(&[1, 99]).unwrap_err(), Error::UnknownSymbol(2));
}

#[test]
fn random_dictionaries_match_oracle() {
    let mut rng = rng(31);
    for _ in 0..150 {
        let (spec, _) = random_case(&mut rng, 0, false);
        let count = rng.gen_range(1..8);
        let patterns = random_dict(&mut rng, &spec, count, 6);
        let d = PDictIndex::build(&patterns, &spec).unwrap();
        check_structure(&d, &patterns, &spec);
        let a = alpha(&spec);
        for _ in 0..5 {
            let len = rng.gen_range(0..80);
            let t = random_body(&mut rng, &spec, len);
            assert_eq!(d.scan(&t).unwrap(), oracle::naive_dict_scan(&patterns, &t, &a), "{patterns:?} {t:?}");
        }
    }
}

#[test]
fn scan_is_independent_of_pattern_order() {
    let mut rng = rng(32);
    for _ in 0..40 {
        let (spec, _) = random_case(&mut rng, 0, false);
        let patterns = random_dict(&mut rng, &spec, 6, 5);
        let len = rng.gen_range(0..60);
        let t = random_body(&mut rng, &spec, len);
        let base = PDictIndex::build(&patterns, &spec).unwrap().scan(&t).unwrap();
        let mut perm: Vec<usize> = (0..patterns.len()).collect();
        perm.shuffle(&mut rng);
        let shuffled: Vec<Vec<u32>> = perm.iter().map(|&i| patterns[i].clone()).collect();
        let mut got: Vec<(usize, usize)> = PDictIndex::build(&shuffled, &spec)
            .unwrap()
            .scan(&t)
            .unwrap()
            .into_iter()
            .map(|(j, id)| (j, perm[id - 1] + 1))
            .collect();
        got.sort_unstable();
        assert_eq!(got, base);
    }
}

#[test]
fn serial_round_trip() {
    use pbwt::serial::{Reader, Serial, Writer};
    let mut rng = rng(33);
    let (spec, _) = random_case(&mut rng, 0, false);
    let patterns = random_dict(&mut rng, &spec, 5, 6);
    let d = PDictIndex::build(&patterns, &spec).unwrap();
    let mut w = Writer::new();
    d.write(&mut w);
    let bytes = w.into_bytes();
    assert_eq!(PDictIndex::read(&mut Reader::new(&bytes)).unwrap(), d);
}
