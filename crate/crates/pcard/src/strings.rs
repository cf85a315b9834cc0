//! Strings over a finite alphabet and their length-lexicographic
//! correspondence with the naturals.
//!
//! The rank of a string is its 0-based index in the length-lex
//! enumeration of its alphabet (the empty string has rank 0), so every
//! string *is* a natural number and vice versa. Pairing, alphabet
//! conversion, and string arithmetic all route through that
//! correspondence.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::{Error, Result};

/// Arbitrary-precision natural number; ranks of long strings do not fit
/// in machine words.
pub type Nat = BigUint;

/// Largest alphabet the text serialization can express with one
/// alphanumeric digit per symbol.
pub const MAX_ALPHABET: usize = 36;

/// A finite alphabet of size at least 2. Symbols are the indices
/// `0..size`; there is no further structure.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Alphabet {
    size: usize,
}

impl Alphabet {
    pub fn new(size: usize) -> Result<Self> {
        if size < 2 {
            return Err(Error::AlphabetTooSmall(size));
        }
        if size > MAX_ALPHABET {
            return Err(Error::AlphabetTooLarge(size, MAX_ALPHABET));
        }
        Ok(Alphabet { size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Count of strings of length strictly below `len`:
    /// 1 + s + s^2 + ... + s^(len-1).
    pub fn shorter_count(&self, len: usize) -> Nat {
        let sigma = BigUint::from(self.size);
        (sigma.pow(len as u32) - 1u32) / (self.size - 1)
    }

    /// Count of strings of length at most `len`.
    pub fn upto_count(&self, len: u64) -> Nat {
        let sigma = BigUint::from(self.size);
        (sigma.pow(len as u32 + 1) - 1u32) / (self.size - 1)
    }
}

/// A string over a declared alphabet: a (possibly empty) sequence of
/// symbol indices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Str {
    alphabet: Alphabet,
    symbols: Arc<Vec<u8>>,
}

impl Str {
    pub fn new(alphabet: Alphabet, symbols: Vec<u8>) -> Result<Self> {
        if let Some(&bad) = symbols.iter().find(|&&s| s as usize >= alphabet.size) {
            return Err(Error::SymbolOutOfRange {
                symbol: bad as usize,
                size: alphabet.size,
            });
        }
        Ok(Str {
            alphabet,
            symbols: Arc::new(symbols),
        })
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        Str {
            alphabet,
            symbols: Arc::new(Vec::new()),
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn first(&self) -> Option<u8> {
        self.symbols.first().copied()
    }

    /// Concatenation. Errors on alphabet mismatch.
    pub fn concat(&self, other: &Str) -> Result<Str> {
        self.check_alphabet(other)?;
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.symbols);
        v.extend_from_slice(&other.symbols);
        Str::new(self.alphabet, v)
    }

    /// Prefix the single symbol `tag`.
    pub fn tagged(&self, tag: u8) -> Result<Str> {
        if tag as usize >= self.alphabet.size {
            return Err(Error::SymbolOutOfRange {
                symbol: tag as usize,
                size: self.alphabet.size,
            });
        }
        let mut v = Vec::with_capacity(self.len() + 1);
        v.push(tag);
        v.extend_from_slice(&self.symbols);
        Str::new(self.alphabet, v)
    }

    /// Strip a leading `tag` symbol; `None` when the string does not
    /// start with it.
    pub fn untagged(&self, tag: u8) -> Option<Str> {
        if self.first() == Some(tag) {
            Some(Str {
                alphabet: self.alphabet,
                symbols: Arc::new(self.symbols[1..].to_vec()),
            })
        } else {
            None
        }
    }

    pub fn starts_with(&self, prefix: &Str) -> bool {
        self.alphabet == prefix.alphabet && self.symbols.starts_with(prefix.symbols())
    }

    pub fn strip_prefix(&self, prefix: &Str) -> Option<Str> {
        if self.starts_with(prefix) {
            Some(Str {
                alphabet: self.alphabet,
                symbols: Arc::new(self.symbols[prefix.len()..].to_vec()),
            })
        } else {
            None
        }
    }

    pub fn strip_suffix(&self, suffix: &Str) -> Option<Str> {
        if self.alphabet == suffix.alphabet && self.symbols.ends_with(suffix.symbols()) {
            Some(Str {
                alphabet: self.alphabet,
                symbols: Arc::new(self.symbols[..self.len() - suffix.len()].to_vec()),
            })
        } else {
            None
        }
    }

    pub fn check_alphabet(&self, other: &Str) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch {
                expected: self.alphabet.size,
                actual: other.alphabet.size,
            });
        }
        Ok(())
    }

    /// Length-lexicographic comparison: shorter first, ties broken by
    /// symbol order. Total on strings of one alphabet.
    pub fn lex_cmp(&self, other: &Str) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.symbols.cmp(&other.symbols))
    }
}

impl fmt::Debug for Str {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Str({self})")
    }
}

const DIGITS: &[u8; 36] = b"0123456789abcdefghijklmnopqrstuvwxyz";

impl fmt::Display for Str {
    /// `<alphabet-size>:<digits>`; the empty string over a binary
    /// alphabet prints as `2:`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.alphabet.size)?;
        for &s in self.symbols.iter() {
            write!(f, "{}", DIGITS[s as usize] as char)?;
        }
        Ok(())
    }
}

impl FromStr for Str {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let parse_err = |why: &str| Error::StrParse(text.to_string(), why.to_string());
        let (size_part, digit_part) = text
            .split_once(':')
            .ok_or_else(|| parse_err("missing ':' separator"))?;
        let size: usize = size_part
            .parse()
            .map_err(|_| parse_err("alphabet size is not a number"))?;
        let alphabet = Alphabet::new(size)?;
        let mut symbols = Vec::with_capacity(digit_part.len());
        for ch in digit_part.chars() {
            let idx = DIGITS
                .iter()
                .position(|&d| d as char == ch.to_ascii_lowercase())
                .ok_or_else(|| parse_err("digit outside 0-9a-z"))?;
            symbols.push(idx as u8);
        }
        Str::new(alphabet, symbols)
    }
}

/// Number of strings length-lex below `x`: the 0-based index of `x` in
/// the enumeration of its alphabet.
pub fn rank(x: &Str) -> Nat {
    let sigma = BigUint::from(x.alphabet().size());
    let mut value = BigUint::zero();
    for &s in x.symbols() {
        value = value * &sigma + BigUint::from(s);
    }
    x.alphabet().shorter_count(x.len()) + value
}

/// Inverse of [`rank`]: the string of index `n` over alphabet `a`.
pub fn unrank(n: &Nat, a: Alphabet) -> Str {
    let sigma = BigUint::from(a.size());
    // Find the length band: largest len with shorter_count(len) <= n.
    let mut len = 0usize;
    let mut below = BigUint::zero(); // shorter_count(len)
    let mut band = BigUint::one(); // sigma^len
    while &below + &band <= *n {
        below += &band;
        band *= &sigma;
        len += 1;
    }
    let mut value = n - below;
    let mut symbols = vec![0u8; len];
    for slot in symbols.iter_mut().rev() {
        let (q, r) = value.div_rem(&sigma);
        *slot = r.to_u8().expect("digit fits in u8");
        value = q;
    }
    Str::new(a, symbols).expect("digits are in range by construction")
}

/// Cantor pairing on naturals: (a+b)(a+b+1)/2 + b.
pub fn cantor_pair(a: &Nat, b: &Nat) -> Nat {
    let s = a + b;
    (&s * (&s + 1u32)) / 2u32 + b
}

/// Inverse of [`cantor_pair`] via integer square root.
pub fn cantor_unpair(z: &Nat) -> (Nat, Nat) {
    let w = ((z * 8u32 + 1u32).sqrt() - 1u32) / 2u32;
    let t = (&w * (&w + 1u32)) / 2u32;
    let b = z - t;
    let a = w - &b;
    (a, b)
}

/// Pairing bijection on strings: Cantor pairing applied to ranks.
pub fn pair(x: &Str, y: &Str) -> Result<Str> {
    x.check_alphabet(y)?;
    Ok(unrank(&cantor_pair(&rank(x), &rank(y)), x.alphabet()))
}

/// Inverse of [`pair`].
pub fn unpair(z: &Str) -> (Str, Str) {
    let (a, b) = cantor_unpair(&rank(z));
    (unrank(&a, z.alphabet()), unrank(&b, z.alphabet()))
}

/// Rank-preserving re-expression of `x` over the `target` alphabet.
pub fn convert_alphabet(x: &Str, target: Alphabet) -> Str {
    unrank(&rank(x), target)
}

/// String arithmetic: the string whose rank is `rank(x) + n`. Errors
/// when the result would fall below the empty string.
pub fn str_add(x: &Str, n: i64) -> Result<Str> {
    let r = BigInt::from_biguint(Sign::Plus, rank(x)) + n;
    let (sign, mag) = r.into_parts();
    if sign == Sign::Minus {
        return Err(Error::Underflow {
            rank: rank(x).to_string(),
            delta: n.to_string(),
        });
    }
    Ok(unrank(&mag, x.alphabet()))
}

/// Iterator over all strings of `a` in length-lex order, starting at
/// the empty string. Mostly for exhaustive checks.
pub fn enumerate(a: Alphabet) -> impl Iterator<Item = Str> {
    LengthLexIter {
        alphabet: a,
        next: Some(Vec::new()),
    }
}

/// All strings of length at most `n`, in length-lex order.
pub fn enumerate_upto_len(a: Alphabet, n: u64) -> Vec<Str> {
    enumerate(a).take_while(|s| s.len() as u64 <= n).collect()
}

struct LengthLexIter {
    alphabet: Alphabet,
    next: Option<Vec<u8>>,
}

impl Iterator for LengthLexIter {
    type Item = Str;

    fn next(&mut self) -> Option<Str> {
        let current = self.next.take()?;
        let out = Str::new(self.alphabet, current.clone()).expect("in-range by construction");
        // Odometer step: increment with carry, extend on overflow.
        let top = (self.alphabet.size() - 1) as u8;
        let mut digits = current;
        let mut i = digits.len();
        loop {
            if i == 0 {
                for d in digits.iter_mut() {
                    *d = 0;
                }
                digits.push(0);
                break;
            }
            i -= 1;
            if digits[i] < top {
                digits[i] += 1;
                for d in digits[i + 1..].iter_mut() {
                    *d = 0;
                }
                break;
            }
        }
        self.next = Some(digits);
        Some(out)
    }
}

/// Helper for fixtures and tests: parse a `size:digits` literal,
/// panicking on malformed input.
pub fn lit(text: &str) -> Str {
    text.parse().expect("valid string literal")
}
