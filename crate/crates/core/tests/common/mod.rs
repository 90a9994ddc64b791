use ncf_kit::field::IntervalSet;
use ncf_kit::{NcfDescriptor, PrimeField};

pub fn field(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in all_permutations(n - 1) {
        for pos in 0..=rest.len() {
            let mut v = rest.clone();
            v.insert(pos, n - 1);
            out.push(v);
        }
    }
    out
}

pub fn cartesian(radix: usize, len: usize) -> Vec<Vec<usize>> {
    (0..len).fold(vec![vec![]], |acc, _| {
        acc.into_iter()
            .flat_map(|v| {
                (0..radix).map(move |d| {
                    let mut w = v.clone();
                    w.push(d);
                    w
                })
            })
            .collect()
    })
}

/// Every valid descriptor for `(p, n)`, built without the library's sweep.
pub fn all_descriptors(p: u64, n: usize) -> Vec<NcfDescriptor> {
    let f = field(p);
    let catalog = f.interval_sets();
    let mut out = Vec::new();
    for sigma in all_permutations(n) {
        for set_idx in cartesian(catalog.len(), n) {
            let sets: Vec<IntervalSet> = set_idx.iter().map(|&i| catalog[i]).collect();
            for b in cartesian(p as usize, n + 1) {
                if b[n] == b[n - 1] {
                    continue;
                }
                let b: Vec<u8> = b.iter().map(|&x| x as u8).collect();
                out.push(NcfDescriptor::new(f, sigma.clone(), sets.clone(), b).unwrap());
            }
        }
    }
    out
}

/// Direct evaluation of the nested if-then-else ladder.
pub fn ladder(d: &NcfDescriptor, x: &[u8]) -> u8 {
    for (i, (&v, s)) in d.sigma().iter().zip(d.sets()).enumerate() {
        if s.contains(x[v]) {
            return d.outputs()[i];
        }
    }
    d.outputs()[d.arity()]
}
