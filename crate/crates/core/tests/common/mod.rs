#![allow(dead_code)]

use braid_regions::ArrangementSpec;
use proptest::prelude::*;

/// Random spec with `n` in `ns` and offsets in `[-m, m]`, each pair an arbitrary subset.
pub fn spec_strategy(
    ns: std::ops::RangeInclusive<usize>,
    m: i64,
) -> impl Strategy<Value = ArrangementSpec> {
    ns.prop_flat_map(move |n| {
        let pairs = n * (n - 1) / 2;
        let width = (2 * m + 1) as usize;
        (
            Just(n),
            prop::collection::vec(prop::collection::vec(any::<bool>(), width), pairs),
        )
    })
    .prop_map(move |(n, masks)| {
        let mut entries = Vec::new();
        let mut it = masks.into_iter();
        for i in 1..=n as i64 {
            for j in i + 1..=n as i64 {
                let mask = it.next().unwrap();
                let set: Vec<i64> = (-m..=m)
                    .zip(mask)
                    .filter(|&(_, b)| b)
                    .map(|(s, _)| s)
                    .collect();
                entries.push((i, j, set));
            }
        }
        ArrangementSpec::new(n, entries).unwrap()
    })
}

pub fn ish_presets(max_n: usize) -> Vec<ArrangementSpec> {
    (2..=max_n)
        .map(|n| ArrangementSpec::ish(n).unwrap())
        .collect()
}

pub fn small_presets() -> Vec<ArrangementSpec> {
    let mut out = Vec::new();
    for n in 1..=4 {
        out.push(ArrangementSpec::empty(n).unwrap());
        out.push(ArrangementSpec::braid(n).unwrap());
        out.push(ArrangementSpec::shi(n).unwrap());
        out.push(ArrangementSpec::ish(n).unwrap());
    }
    out
}
