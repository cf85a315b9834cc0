//! Named partial maps bundled with their inverses. These are the
//! building blocks for injection catalogs, machine catalogs, and the
//! CLI map expressions.

use std::sync::Arc;

use crate::strings::{self, Alphabet, Str};
use crate::witness::{PartialMap, TimeBound};

/// A map together with its (partial) inverse evaluator.
#[derive(Clone, Debug)]
pub struct InvertibleMap {
    pub map: PartialMap,
    pub inverse: PartialMap,
}

impl InvertibleMap {
    pub fn swapped(&self) -> InvertibleMap {
        InvertibleMap {
            map: self.inverse.clone(),
            inverse: self.map.clone(),
        }
    }
}

fn cost(input: &Str, output: &Str) -> u64 {
    input.len() as u64 + output.len() as u64 + 1
}

/// x -> w.x with inverse stripping the prefix.
pub fn prepend(w: Str) -> InvertibleMap {
    let a = w.alphabet();
    let bound = TimeBound::new(w.len() as u64 + 2, 1);
    let w_fwd = w.clone();
    let map = PartialMap::new(
        format!("prepend({w})"),
        a,
        a,
        bound,
        Arc::new(move |x: &Str| {
            let out = w_fwd.concat(x).expect("same alphabet");
            let steps = cost(x, &out);
            (Some(out), steps)
        }),
    );
    let w_inv = w.clone();
    let inverse = PartialMap::new(
        format!("strip_prefix({w})"),
        a,
        a,
        bound,
        Arc::new(move |x: &Str| match x.strip_prefix(&w_inv) {
            Some(out) => {
                let steps = cost(x, &out);
                (Some(out), steps)
            }
            None => (None, x.len() as u64 + 1),
        }),
    );
    InvertibleMap { map, inverse }
}

/// x -> x.w with inverse stripping the suffix.
pub fn append(w: Str) -> InvertibleMap {
    let a = w.alphabet();
    let bound = TimeBound::new(w.len() as u64 + 2, 1);
    let w_fwd = w.clone();
    let map = PartialMap::new(
        format!("append({w})"),
        a,
        a,
        bound,
        Arc::new(move |x: &Str| {
            let out = x.concat(&w_fwd).expect("same alphabet");
            let steps = cost(x, &out);
            (Some(out), steps)
        }),
    );
    let w_inv = w.clone();
    let inverse = PartialMap::new(
        format!("strip_suffix({w})"),
        a,
        a,
        bound,
        Arc::new(move |x: &Str| match x.strip_suffix(&w_inv) {
            Some(out) => {
                let steps = cost(x, &out);
                (Some(out), steps)
            }
            None => (None, x.len() as u64 + 1),
        }),
    );
    InvertibleMap { map, inverse }
}

/// The identity on all strings of `a`.
pub fn identity(a: Alphabet) -> InvertibleMap {
    let make = || {
        PartialMap::new(
            "identity",
            a,
            a,
            TimeBound::new(2, 1),
            Arc::new(move |x: &Str| (Some(x.clone()), cost(x, x))),
        )
    };
    InvertibleMap {
        map: make(),
        inverse: make(),
    }
}

/// Rank successor, with the predecessor (undefined at the empty
/// string) as inverse.
pub fn successor(a: Alphabet) -> InvertibleMap {
    let map = PartialMap::new(
        "successor",
        a,
        a,
        TimeBound::new(2, 1),
        Arc::new(move |x: &Str| {
            let out = strings::str_add(x, 1).expect("adding one cannot underflow");
            let steps = cost(x, &out);
            (Some(out), steps)
        }),
    );
    let inverse = PartialMap::new(
        "predecessor",
        a,
        a,
        TimeBound::new(2, 1),
        Arc::new(move |x: &Str| match strings::str_add(x, -1) {
            Ok(out) => {
                let steps = cost(x, &out);
                (Some(out), steps)
            }
            Err(_) => (None, 1),
        }),
    );
    InvertibleMap { map, inverse }
}

/// The nowhere-defined map.
pub fn empty_map(a: Alphabet) -> InvertibleMap {
    let make = || {
        PartialMap::new(
            "empty_map",
            a,
            a,
            TimeBound::new(1, 0),
            Arc::new(|_: &Str| (None, 1)),
        )
    };
    InvertibleMap {
        map: make(),
        inverse: make(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strings::lit;

    #[test]
    fn prepend_roundtrip() {
        let m = prepend(lit("2:01"));
        assert_eq!(m.map.value(&lit("2:1")).unwrap().unwrap(), lit("2:011"));
        assert_eq!(m.inverse.value(&lit("2:011")).unwrap().unwrap(), lit("2:1"));
        assert_eq!(m.inverse.value(&lit("2:111")).unwrap(), None);
    }

    #[test]
    fn append_roundtrip() {
        let m = append(lit("2:0"));
        assert_eq!(m.map.value(&lit("2:1")).unwrap().unwrap(), lit("2:10"));
        assert_eq!(m.inverse.value(&lit("2:10")).unwrap().unwrap(), lit("2:1"));
        assert_eq!(m.inverse.value(&lit("2:11")).unwrap(), None);
    }

    #[test]
    fn successor_predecessor() {
        let a = Alphabet::new(2).unwrap();
        let m = successor(a);
        assert_eq!(m.map.value(&Str::empty(a)).unwrap().unwrap(), lit("2:0"));
        assert_eq!(m.inverse.value(&Str::empty(a)).unwrap(), None);
        assert_eq!(m.inverse.value(&lit("2:0")).unwrap().unwrap(), Str::empty(a));
    }
}
