//! Brute-force oracles for small instances, shared by the core test suite
//! and the acceptance runner.
//!
//! The oracle regenerates vectors from its own SplitMix64 and works on plain
//! `±1` integer arrays, so it shares no code with the bit-packed path.

use std::collections::HashMap;

use hdv_core::context::build_context_model;
use hdv_core::sentence::{SentenceConfig, SentenceIndex};
use hdv_core::spam::{train_filter, Label, Message};
use hdv_core::textpipe::{build_vocabulary, PipelineConfig, Token};
use hdv_core::{BundleAccumulator, BundleVector, Hypervector};

fn oracle_vector(dim: usize, seed: u64, index: u64) -> Vec<i64> {
    let mut state = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    let mut draws = Vec::new();
    for _ in 0..dim.div_ceil(64) {
        state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        draws.push(z ^ (z >> 31));
    }
    (0..dim)
        .map(|j| if (draws[j / 64] >> (63 - j % 64)) & 1 == 1 { 1 } else { -1 })
        .collect()
}

fn oracle_dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn as_signs(v: &[i64]) -> Hypervector {
    Hypervector::from_signs(&v.iter().map(|&x| x > 0).collect::<Vec<_>>()).unwrap()
}

/// Tiny deterministic generator for picking test cases.
struct Lcg(u64);

impl Lcg {
    fn below(&mut self, n: u64) -> u64 {
        self.0 = self.0.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1_442_695_040_888_963_407);
        (self.0 >> 33) % n
    }
}

pub fn generation_matches_oracle() {
    for (dim, seed, index) in [(1, 0, 0), (64, 1, 2), (65, 3, 4), (1000, 42, 999), (130, u64::MAX, 7)] {
        let v = Hypervector::generate(dim, seed, index).unwrap();
        let got: Vec<i64> = v.signs().map(i64::from).collect();
        assert_eq!(got, oracle_vector(dim, seed, index));
    }
}

fn check_linearity(members: &[Vec<i64>], query: &[i64]) {
    let mut bundle = BundleVector::new(query.len()).unwrap();
    let mut acc = BundleAccumulator::new(query.len()).unwrap();
    for m in members {
        bundle.add(&as_signs(m)).unwrap();
        acc.add(&as_signs(m)).unwrap();
    }
    assert_eq!(acc.finish(), bundle);
    let expected: i64 = members.iter().map(|m| oracle_dot(m, query)).sum();
    let q = as_signs(query);
    assert_eq!(bundle.raw_score(&q).unwrap(), expected);
    let score = bundle.membership_score(&q).unwrap().value;
    assert_eq!(score, expected as f64 / query.len() as f64);
    for (i, &c) in bundle.components().iter().enumerate() {
        let col: i64 = members.iter().map(|m| m[i]).sum();
        assert_eq!(i64::from(c), col);
        assert_eq!((i64::from(c) - members.len() as i64).rem_euclid(2), 0);
    }
}

pub fn bundle_linearity_exhaustive_small_dims() {
    // every multiset (as ordered sequence) of up to 4 vectors, every query
    for dim in 1..=4usize {
        let all: Vec<Vec<i64>> = (0..1u32 << dim)
            .map(|bits| (0..dim).map(|j| if bits >> j & 1 == 1 { 1 } else { -1 }).collect())
            .collect();
        let n = all.len();
        for size in 1..=4u32 {
            for code in 0..n.pow(size) {
                let members: Vec<Vec<i64>> = (0..size)
                    .map(|p| all[(code / n.pow(p)) % n].clone())
                    .collect();
                for q in &all {
                    check_linearity(&members, q);
                }
            }
        }
    }
}

pub fn bundle_linearity_sampled_up_to_d16() {
    let mut rng = Lcg(1);
    for dim in 5..=16usize {
        for _ in 0..400 {
            let size = 1 + rng.below(4);
            let members: Vec<Vec<i64>> = (0..size)
                .map(|_| oracle_vector(dim, 11, rng.below(64)))
                .collect();
            check_linearity(&members, &oracle_vector(dim, 11, rng.below(64)));
        }
    }
}

pub fn bundle_linearity_random_up_to_d64() {
    let mut rng = Lcg(2);
    for _ in 0..2000 {
        let dim = 1 + rng.below(64) as usize;
        let k = 1 + rng.below(8);
        let members: Vec<Vec<i64>> = (0..k).map(|_| oracle_vector(dim, 5, rng.below(1 << 20))).collect();
        let query = if rng.below(2) == 0 {
            members[0].clone()
        } else {
            oracle_vector(dim, 5, rng.below(1 << 20))
        };
        check_linearity(&members, &query);
    }
}

fn tokens_of(words: &[String]) -> Vec<Token> {
    words.iter().enumerate().map(|(i, w)| Token::new(w.clone(), i)).collect()
}

pub fn context_builder_matches_window_counting() {
    let mut rng = Lcg(3);
    for case in 0..60 {
        let len = 1 + rng.below(200) as usize;
        let alphabet = 1 + rng.below(25);
        let half = 1 + rng.below(6) as usize;
        let dim = 1 + rng.below(64) as usize;
        let words: Vec<String> = (0..len).map(|_| format!("w{}", rng.below(alphabet))).collect();
        let tokens = tokens_of(&words);
        let vocab = build_vocabulary(&tokens, dim, case).unwrap();
        let model = build_context_model(&tokens, &vocab, half).unwrap();

        // theta[center][ctx] by scanning every window directly
        let mut theta: HashMap<&str, HashMap<&str, i64>> = HashMap::new();
        for (pos, center) in words.iter().enumerate() {
            for (other, ctx) in words.iter().enumerate() {
                if other != pos && other.abs_diff(pos) <= half {
                    *theta.entry(center).or_default().entry(ctx).or_default() += 1;
                }
            }
        }
        let oracle = |w: &str| oracle_vector(dim, case, vocab.index_of(w).unwrap() as u64);

        let mut mass = 0u64;
        for center in vocab.words() {
            let row = theta.get(center.as_str()).cloned().unwrap_or_default();
            let mut expected = vec![0i64; dim];
            for (ctx, &t) in &row {
                for (e, x) in expected.iter_mut().zip(oracle(ctx)) {
                    *e += t * x;
                }
            }
            let got = model.context(center).unwrap();
            let got_components: Vec<i64> = got.components().iter().map(|&c| c.into()).collect();
            assert_eq!(got_components, expected, "case {case} word {center}");
            assert_eq!(got.count() as i64, row.values().sum::<i64>());
            mass += got.count();

            for probe in vocab.words() {
                let expected_score = oracle_dot(&expected, &oracle(probe));
                let score = model.context_contains(center, probe).unwrap().value;
                assert_eq!(score, expected_score as f64 / dim as f64);
            }
        }
        // clipped-window mass formula
        let n = len;
        let clipped: usize = (0..n).map(|l| l.min(half) + (n - 1 - l).min(half)).sum();
        assert_eq!(mass, clipped as u64);
    }
}

pub fn sentence_vectors_match_token_sums() {
    let mut rng = Lcg(4);
    let config = SentenceConfig {
        pipeline: PipelineConfig::bare(),
        dim: 32,
        seed: 8,
    };
    let sentences: Vec<String> = (0..50)
        .map(|_| {
            let len = 1 + rng.below(20);
            (0..len).map(|_| format!("t{}", rng.below(12))).collect::<Vec<_>>().join(" ")
        })
        .collect();
    let index = SentenceIndex::from_sentences(sentences.clone(), &config).unwrap();
    assert_eq!(index.len(), sentences.len());
    for (record, text) in index.sentences().iter().zip(&sentences) {
        let mut expected = vec![0i64; 32];
        for w in text.split(' ') {
            let v = oracle_vector(32, 8, index.vocabulary().index_of(w).unwrap() as u64);
            for (e, x) in expected.iter_mut().zip(v) {
                *e += x;
            }
        }
        let got: Vec<i64> = record.vector.components().iter().map(|&c| c.into()).collect();
        assert_eq!(got, expected);
        assert_eq!(record.vector.count(), text.split(' ').count() as u64);
    }
}

pub fn classification_matches_linear_scan() {
    let mut rng = Lcg(5);
    for case in 0..200u64 {
        let dim = 1 + rng.below(64) as usize;
        let n = 2 + rng.below(19) as usize;
        let mut train: Vec<Message> = (0..n)
            .map(|i| {
                let len = 1 + rng.below(8);
                let words: Vec<String> = (0..len).map(|_| format!("v{}", rng.below(15))).collect();
                Message {
                    message_id: format!("m{i}"),
                    tokens: tokens_of(&words),
                    label: if i % 2 == 0 { Label::Spam } else { Label::Legitimate },
                }
            })
            .collect();
        train[1].label = Label::Legitimate;
        let filter = train_filter(&train, dim, case).unwrap();

        let len = 1 + rng.below(8);
        let query_words: Vec<String> = (0..len).map(|_| format!("v{}", rng.below(18))).collect();
        let vocab = filter.vocabulary();
        let sum = |words: &[String]| {
            let mut acc = vec![0i64; dim];
            for w in words.iter().filter_map(|w| vocab.index_of(w)) {
                for (a, x) in acc.iter_mut().zip(oracle_vector(dim, case, w as u64)) {
                    *a += x;
                }
            }
            acc
        };
        let zeta = sum(&query_words);
        let got = filter.classify(&tokens_of(&query_words));
        if zeta.iter().all(|&x| x == 0) && !query_words.iter().any(|w| vocab.index_of(w).is_some()) {
            assert!(got.is_none());
            continue;
        }
        let mut best: Option<(usize, f64)> = None;
        for (i, m) in train.iter().enumerate() {
            let words: Vec<String> = m.tokens.iter().map(|t| t.text.clone()).collect();
            let gamma = sum(&words);
            let (nz, ng) = (oracle_dot(&zeta, &zeta), oracle_dot(&gamma, &gamma));
            if nz == 0 || ng == 0 {
                continue;
            }
            let score = oracle_dot(&zeta, &gamma) as f64 / (nz as f64 * ng as f64).sqrt();
            if best.is_none_or(|(_, b)| score > b) {
                best = Some((i, score));
            }
        }
        match (got, best) {
            (Some(c), Some((i, score))) => {
                assert_eq!(c.best_match, i, "case {case}");
                assert_eq!(c.score, score);
                assert_eq!(c.label, train[i].label);
            }
            (None, None) => {}
            (g, b) => panic!("case {case}: got {g:?}, oracle {b:?}"),
        }
    }
}
