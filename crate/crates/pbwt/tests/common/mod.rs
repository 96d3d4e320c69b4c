#![allow(dead_code)]

use pbwt::AlphabetSpec;
use pbwt_oracle::Alpha;
use rand::Rng;

const STATICS: [char; 3] = ['A', 'B', 'C'];
const PARAMS: [char; 6] = ['u', 'v', 'w', 'x', 'y', 'z'];

/// Random alphabet with `sp` parameterized and `ss` non-terminator static
/// symbols; when `paired`, a random matching on the parameterized ones.
pub fn random_spec<R: Rng>(rng: &mut R, sp: usize, ss: usize, paired: bool) -> AlphabetSpec {
    let params = &PARAMS[..sp];
    let mut pairs = Vec::new();
    if paired {
        let mut free: Vec<char> = params.to_vec();
        while free.len() >= 2 {
            let a = free.swap_remove(rng.gen_range(0..free.len()));
            let b = free.swap_remove(rng.gen_range(0..free.len()));
            if rng.gen_bool(0.7) {
                pairs.push((a, b));
            }
        }
    }
    AlphabetSpec::new(&STATICS[..ss], params, &pairs).unwrap()
}

pub fn alpha(spec: &AlphabetSpec) -> Alpha {
    Alpha { sp: spec.sigma_p(), comp: spec.complement_table().to_vec() }
}

/// Random body of `len` symbols followed by the terminator.
pub fn random_text<R: Rng>(rng: &mut R, spec: &AlphabetSpec, len: usize) -> Vec<u32> {
    let mut t: Vec<u32> = (0..len).map(|_| rng.gen_range(1..spec.sigma())).collect();
    t.push(spec.terminator());
    t
}

/// Random string without the terminator.
pub fn random_body<R: Rng>(rng: &mut R, spec: &AlphabetSpec, len: usize) -> Vec<u32> {
    (0..len).map(|_| rng.gen_range(1..spec.sigma())).collect()
}

/// A random spec and text; parameterized symbols are favoured so the
/// interesting branches are exercised.
pub fn random_case<R: Rng>(rng: &mut R, max_len: usize, paired: bool) -> (AlphabetSpec, Vec<u32>) {
    let sp = rng.gen_range(1..=4);
    let ss = rng.gen_range(0..=3);
    let spec = random_spec(rng, sp, ss, paired);
    let len = rng.gen_range(0..=max_len);
    let t = random_text(rng, &spec, len);
    (spec, t)
}

pub fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

/// Random dictionary with distinct prev encodings.
pub fn random_dict(rng: &mut impl Rng, spec: &AlphabetSpec, count: usize, max_len: usize) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for _ in 0..count * 3 {
        if out.len() == count {
            break;
        }
        let len = rng.gen_range(1..=max_len);
        let p = random_body(rng, spec, len);
        if seen.insert(pbwt::alphabet::prev_encode(&p, spec.sigma_p())) {
            out.push(p);
        }
    }
    out
}
