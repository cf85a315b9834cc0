//! The expression DSL for naming languages, witnesses, maps, and
//! collections on the command line.
//!
//! Grammar:
//! ```text
//! expr   := name "(" args ")" | strlit | int
//! args   := (arg ("," arg)*)?
//! arg    := expr | "[" items "]" | key "=" "[" items "]"
//! strlit := '"' <size> ':' <digits> '"'
//! ```

use std::fmt;

use pcard::choice::{self, Collection};
use pcard::language::{self, GalleryArg, Language};
use pcard::maps::{self, InvertibleMap};
use pcard::poly::Polynomial;
use pcard::ranking;
use pcard::strings::{Alphabet, Str};
use pcard::witness::{self, Equipollence};

/// A parse error with a byte position, or a type error.
#[derive(Debug, Clone)]
pub struct ExprError {
    pub position: Option<usize>,
    pub message: String,
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.position {
            Some(p) => write!(f, "at byte {p}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

impl std::error::Error for ExprError {}

fn err<T>(position: Option<usize>, message: impl Into<String>) -> Result<T, ExprError> {
    Err(ExprError {
        position,
        message: message.into(),
    })
}

/// Parse tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Call {
        name: String,
        args: Vec<Arg>,
    },
    StrLit(String),
    Int(u64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Arg {
    Positional(Expr),
    List(Vec<Expr>),
    Keyed(String, Vec<Expr>),
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Call { name, args } => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    match a {
                        Arg::Positional(e) => write!(f, "{e}")?,
                        Arg::List(items) => {
                            write!(f, "[")?;
                            for (j, it) in items.iter().enumerate() {
                                if j > 0 {
                                    write!(f, ",")?;
                                }
                                write!(f, "{it}")?;
                            }
                            write!(f, "]")?;
                        }
                        Arg::Keyed(k, items) => {
                            write!(f, "{k}=[")?;
                            for (j, it) in items.iter().enumerate() {
                                if j > 0 {
                                    write!(f, ",")?;
                                }
                                write!(f, "{it}")?;
                            }
                            write!(f, "]")?;
                        }
                    }
                }
                write!(f, ")")
            }
            Expr::StrLit(s) => write!(f, "\"{s}\""),
            Expr::Int(n) => write!(f, "{n}"),
        }
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser { text, pos: 0 }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn eat(&mut self, expected: char) -> Result<(), ExprError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == expected => {
                self.pos += c.len_utf8();
                Ok(())
            }
            Some(c) => err(Some(self.pos), format!("expected '{expected}', found '{c}'")),
            None => err(Some(self.pos), format!("expected '{expected}', found end")),
        }
    }

    fn ident(&mut self) -> Result<String, ExprError> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        if start == self.pos {
            return err(Some(start), "expected an identifier");
        }
        Ok(self.text[start..self.pos].to_string())
    }

    fn string_lit(&mut self) -> Result<Expr, ExprError> {
        self.eat('"')?;
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c == '"' {
                let content = self.text[start..self.pos].to_string();
                self.pos += 1;
                return Ok(Expr::StrLit(content));
            }
            self.pos += c.len_utf8();
        }
        err(Some(start), "unterminated string literal")
    }

    fn int_lit(&mut self) -> Result<Expr, ExprError> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                self.pos += 1;
            } else {
                break;
            }
        }
        if start == self.pos {
            return err(Some(start), "expected a number");
        }
        match self.text[start..self.pos].parse() {
            Ok(n) => Ok(Expr::Int(n)),
            Err(_) => err(Some(start), "number out of range"),
        }
    }

    fn list_items(&mut self) -> Result<Vec<Expr>, ExprError> {
        self.eat('[')?;
        let mut items = Vec::new();
        self.skip_ws();
        if self.peek() == Some(']') {
            self.pos += 1;
            return Ok(items);
        }
        loop {
            items.push(self.expr()?);
            self.skip_ws();
            match self.peek() {
                Some(',') => {
                    self.pos += 1;
                }
                Some(']') => {
                    self.pos += 1;
                    return Ok(items);
                }
                _ => return err(Some(self.pos), "expected ',' or ']' in list"),
            }
        }
    }

    fn arg(&mut self) -> Result<Arg, ExprError> {
        self.skip_ws();
        if self.peek() == Some('[') {
            return Ok(Arg::List(self.list_items()?));
        }
        // Lookahead for key=[...].
        let save = self.pos;
        if self
            .peek()
            .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        {
            let name = self.ident()?;
            self.skip_ws();
            if self.peek() == Some('=') {
                self.pos += 1;
                self.skip_ws();
                let items = self.list_items()?;
                return Ok(Arg::Keyed(name, items));
            }
            self.pos = save;
        }
        Ok(Arg::Positional(self.expr()?))
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        self.skip_ws();
        match self.peek() {
            Some('"') => self.string_lit(),
            Some(c) if c.is_ascii_digit() => self.int_lit(),
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let name = self.ident()?;
                self.eat('(')?;
                let mut args = Vec::new();
                self.skip_ws();
                if self.peek() == Some(')') {
                    self.pos += 1;
                    return Ok(Expr::Call { name, args });
                }
                loop {
                    args.push(self.arg()?);
                    self.skip_ws();
                    match self.peek() {
                        Some(',') => {
                            self.pos += 1;
                        }
                        Some(')') => {
                            self.pos += 1;
                            return Ok(Expr::Call { name, args });
                        }
                        _ => return err(Some(self.pos), "expected ',' or ')' in arguments"),
                    }
                }
            }
            Some(c) => err(Some(self.pos), format!("unexpected character '{c}'")),
            None => err(Some(self.pos), "unexpected end of input"),
        }
    }
}

/// Parses one expression, requiring the whole input to be consumed.
pub fn parse(text: &str) -> Result<Expr, ExprError> {
    let mut p = Parser::new(text);
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != text.len() {
        return err(Some(p.pos), "trailing input after expression");
    }
    Ok(e)
}

/// An evaluated DSL value.
#[derive(Clone)]
pub enum Value {
    Int(u64),
    Text(Str),
    Lang(Language),
    Wit(Box<Equipollence>),
    Map(Box<InvertibleMap>),
    Coll(Box<Collection>),
}

impl Value {
    pub fn kind(&self) -> &'static str {
        match self {
            Value::Int(_) => "integer",
            Value::Text(_) => "string",
            Value::Lang(_) => "language",
            Value::Wit(_) => "witness",
            Value::Map(_) => "map",
            Value::Coll(_) => "collection",
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Value::Int(n) => n.to_string(),
            Value::Text(s) => s.to_string(),
            Value::Lang(l) => l.name().to_string(),
            Value::Wit(w) => format!("{} ~ {}", w.a.name(), w.b.name()),
            Value::Map(m) => m.map.name().to_string(),
            Value::Coll(c) => c.carrier().name().to_string(),
        }
    }
}

fn type_err<T>(name: &str, expected: &str) -> Result<T, ExprError> {
    err(
        None,
        format!("{name}: expected {expected} in this position"),
    )
}

fn lift(e: Result<impl Into<Value>, pcard::Error>) -> Result<Value, ExprError> {
    e.map(Into::into).map_err(|x| ExprError {
        position: None,
        message: x.to_string(),
    })
}

impl From<Language> for Value {
    fn from(l: Language) -> Value {
        Value::Lang(l)
    }
}

impl From<Equipollence> for Value {
    fn from(w: Equipollence) -> Value {
        Value::Wit(Box::new(w))
    }
}

impl From<InvertibleMap> for Value {
    fn from(m: InvertibleMap) -> Value {
        Value::Map(Box::new(m))
    }
}

impl From<Collection> for Value {
    fn from(c: Collection) -> Value {
        Value::Coll(Box::new(c))
    }
}

fn eval_args(args: &[Arg]) -> Result<Vec<Value>, ExprError> {
    args.iter()
        .map(|a| match a {
            Arg::Positional(e) => eval(e),
            Arg::List(_) | Arg::Keyed(..) => err(None, "unexpected list argument"),
        })
        .collect()
}

fn want_size(name: &str, v: &Value) -> Result<usize, ExprError> {
    match v {
        Value::Int(n) => Ok(*n as usize),
        _ => type_err(name, "an alphabet size"),
    }
}

fn want_int(name: &str, v: &Value) -> Result<u64, ExprError> {
    match v {
        Value::Int(n) => Ok(*n),
        _ => type_err(name, "an integer"),
    }
}

fn want_str(name: &str, v: &Value) -> Result<Str, ExprError> {
    match v {
        Value::Text(s) => Ok(s.clone()),
        _ => type_err(name, "a string literal"),
    }
}

fn want_lang(name: &str, v: &Value) -> Result<Language, ExprError> {
    match v {
        Value::Lang(l) => Ok(l.clone()),
        _ => type_err(name, "a language"),
    }
}

fn want_wit(name: &str, v: &Value) -> Result<Equipollence, ExprError> {
    match v {
        Value::Wit(w) => Ok((**w).clone()),
        _ => type_err(name, "a witness"),
    }
}

fn alphabet(name: &str, size: usize) -> Result<Alphabet, ExprError> {
    Alphabet::new(size).map_err(|e| ExprError {
        position: None,
        message: format!("{name}: {e}"),
    })
}

fn parse_strs(name: &str, items: &[Expr]) -> Result<Vec<Str>, ExprError> {
    items
        .iter()
        .map(|e| match e {
            Expr::StrLit(s) => s.parse::<Str>().map_err(|x| ExprError {
                position: None,
                message: format!("{name}: {x}"),
            }),
            _ => type_err(name, "string literals in the list"),
        })
        .collect()
}

fn parse_poly(name: &str, items: &[Expr]) -> Result<Polynomial, ExprError> {
    let coeffs = items
        .iter()
        .map(|e| match e {
            Expr::Int(n) => Ok(*n),
            _ => type_err(name, "integer coefficients"),
        })
        .collect::<Result<Vec<u64>, _>>()?;
    Ok(Polynomial::new(coeffs))
}

/// Evaluates an expression to a value.
pub fn eval(e: &Expr) -> Result<Value, ExprError> {
    match e {
        Expr::Int(n) => Ok(Value::Int(*n)),
        Expr::StrLit(s) => {
            let parsed: Str = s.parse().map_err(|x: pcard::Error| ExprError {
                position: None,
                message: x.to_string(),
            })?;
            Ok(Value::Text(parsed))
        }
        Expr::Call { name, args } => eval_call(name, args),
    }
}

fn eval_call(name: &str, args: &[Arg]) -> Result<Value, ExprError> {
    match name {
        // Gallery languages.
        "sigma_star" | "empty" | "complement" | "oplus" | "times" | "prefix" | "shift_set"
        | "tower_gap_A0" | "tower_gap_A1" | "dedekind" => {
            let vals = eval_args(args)?;
            let gargs = vals
                .iter()
                .map(|v| match v {
                    Value::Int(n) => Ok(GalleryArg::Size(*n as usize)),
                    Value::Text(s) => Ok(GalleryArg::Str(s.clone())),
                    Value::Lang(l) => Ok(GalleryArg::Lang(l.clone())),
                    _ => type_err(name, "gallery arguments"),
                })
                .collect::<Result<Vec<_>, _>>()?;
            // shift_set's second argument is a count, not a size.
            let gargs = if name == "shift_set" && gargs.len() == 2 {
                match (&gargs[0], &gargs[1]) {
                    (GalleryArg::Size(k), GalleryArg::Size(n)) => {
                        vec![GalleryArg::Size(*k), GalleryArg::Int(*n as u64)]
                    }
                    _ => gargs,
                }
            } else {
                gargs
            };
            lift(language::gallery(name, gargs))
        }
        "finite" => match args {
            [Arg::List(items)] => {
                let members = parse_strs(name, items)?;
                lift(language::gallery("finite", vec![GalleryArg::Strs(members)]))
            }
            _ => type_err(name, "a list of string literals"),
        },

        // Witnesses.
        "identity_w" => {
            let vals = eval_args(args)?;
            match vals.as_slice() {
                [v] => Ok(witness::identity_witness(&want_lang(name, v)?).into()),
                _ => type_err(name, "one language"),
            }
        }
        "sigma_self_sum" => {
            let vals = eval_args(args)?;
            match vals.as_slice() {
                [v] => Ok(witness::sigma_self_sum(alphabet(name, want_size(name, v)?)?).into()),
                _ => type_err(name, "one alphabet size"),
            }
        }
        "sigma_self_product" => {
            let vals = eval_args(args)?;
            match vals.as_slice() {
                [v] => {
                    Ok(witness::sigma_self_product(alphabet(name, want_size(name, v)?)?).into())
                }
                _ => type_err(name, "one alphabet size"),
            }
        }
        "shift" => {
            let vals = eval_args(args)?;
            match vals.as_slice() {
                [k, n] => {
                    let a = alphabet(name, want_size(name, k)?)?;
                    Ok(witness::shift_witness(a, want_int(name, n)?).into())
                }
                _ => type_err(name, "an alphabet size and a shift count"),
            }
        }
        "compose" => {
            let vals = eval_args(args)?;
            match vals.as_slice() {
                [w1, w2] => lift(witness::compose_witness(
                    &want_wit(name, w1)?,
                    &want_wit(name, w2)?,
                )),
                _ => type_err(name, "two witnesses"),
            }
        }
        "oplus_w" => {
            let vals = eval_args(args)?;
            match vals.as_slice() {
                [w1, w2] => lift(witness::oplus_witness(
                    &want_wit(name, w1)?,
                    &want_wit(name, w2)?,
                )),
                _ => type_err(name, "two witnesses"),
            }
        }
        "times_w" => {
            let vals = eval_args(args)?;
            match vals.as_slice() {
                [w1, w2] => lift(witness::times_witness(
                    &want_wit(name, w1)?,
                    &want_wit(name, w2)?,
                )),
                _ => type_err(name, "two witnesses"),
            }
        }
        "swap_w" => {
            let vals = eval_args(args)?;
            match vals.as_slice() {
                [l, r] => lift(witness::oplus_swap_witness(
                    &want_lang(name, l)?,
                    &want_lang(name, r)?,
                )),
                _ => type_err(name, "two languages"),
            }
        }
        "prepend_w" => {
            let vals = eval_args(args)?;
            match vals.as_slice() {
                [k, t] => {
                    let a = alphabet(name, want_size(name, k)?)?;
                    Ok(witness::prepend_witness(a, want_int(name, t)? as u8).into())
                }
                _ => type_err(name, "an alphabet size and a tag symbol"),
            }
        }
        "flip_w" => {
            let vals = eval_args(args)?;
            match vals.as_slice() {
                [k] => Ok(witness::flip_witness(alphabet(name, want_size(name, k)?)?).into()),
                _ => type_err(name, "one alphabet size"),
            }
        }
        "broken_w" => {
            let vals = eval_args(args)?;
            match vals.as_slice() {
                [k] => Ok(witness::broken_witness(alphabet(name, want_size(name, k)?)?).into()),
                _ => type_err(name, "one alphabet size"),
            }
        }
        "rank_witness" => {
            let vals = eval_args(args)?;
            match vals.as_slice() {
                [l] => lift(ranking::rank_witness(&want_lang(name, l)?, 6)),
                [l, probe] => lift(ranking::rank_witness(
                    &want_lang(name, l)?,
                    want_int(name, probe)?,
                )),
                _ => type_err(name, "a language and an optional probe length"),
            }
        }
        "inverse_w" => {
            let vals = eval_args(args)?;
            match vals.as_slice() {
                [w] => Ok(want_wit(name, w)?.inverted().into()),
                _ => type_err(name, "one witness"),
            }
        }

        // Maps.
        "prepend" => {
            let vals = eval_args(args)?;
            match vals.as_slice() {
                [s] => Ok(maps::prepend(want_str(name, s)?).into()),
                _ => type_err(name, "one string literal"),
            }
        }
        "append" => {
            let vals = eval_args(args)?;
            match vals.as_slice() {
                [s] => Ok(maps::append(want_str(name, s)?).into()),
                _ => type_err(name, "one string literal"),
            }
        }
        "identity_map" => {
            let vals = eval_args(args)?;
            match vals.as_slice() {
                [k] => Ok(maps::identity(alphabet(name, want_size(name, k)?)?).into()),
                _ => type_err(name, "one alphabet size"),
            }
        }
        "successor" => {
            let vals = eval_args(args)?;
            match vals.as_slice() {
                [k] => Ok(maps::successor(alphabet(name, want_size(name, k)?)?).into()),
                _ => type_err(name, "one alphabet size"),
            }
        }
        "empty_map" => {
            let vals = eval_args(args)?;
            match vals.as_slice() {
                [k] => Ok(maps::empty_map(alphabet(name, want_size(name, k)?)?).into()),
                _ => type_err(name, "one alphabet size"),
            }
        }
        "inverse_of" => {
            let vals = eval_args(args)?;
            match vals.as_slice() {
                [Value::Map(m)] => Ok(m.swapped().into()),
                _ => type_err(name, "one map"),
            }
        }

        // Collections.
        "collection" => match args {
            [Arg::Positional(carrier), Arg::Keyed(pk, pitems), Arg::Keyed(qk, qitems)]
                if pk == "p" && qk == "q" =>
            {
                let lang = want_lang(name, &eval(carrier)?)?;
                let p = parse_poly(name, pitems)?;
                let q = parse_poly(name, qitems)?;
                lift(Collection::new(lang, p, q))
            }
            _ => type_err(name, "a carrier language plus p=[...] and q=[...]"),
        },
        "suffix_pairs" => {
            let vals = eval_args(args)?;
            match vals.as_slice() {
                [k] => Ok(choice::suffix_collection(alphabet(name, want_size(name, k)?)?).into()),
                _ => type_err(name, "one alphabet size"),
            }
        }
        "double_pairs" => {
            let vals = eval_args(args)?;
            match vals.as_slice() {
                [k] => {
                    Ok(choice::doubling_collection(alphabet(name, want_size(name, k)?)?).into())
                }
                _ => type_err(name, "one alphabet size"),
            }
        }
        "tag_pairs" => {
            let vals = eval_args(args)?;
            match vals.as_slice() {
                [k] => Ok(choice::tag_collection(alphabet(name, want_size(name, k)?)?).into()),
                _ => type_err(name, "one alphabet size"),
            }
        }
        "const_pairs" => {
            let vals = eval_args(args)?;
            match vals.as_slice() {
                [k] => {
                    Ok(choice::constant_collection(alphabet(name, want_size(name, k)?)?).into())
                }
                _ => type_err(name, "one alphabet size"),
            }
        }
        _ => err(None, format!("unknown construction {name:?}")),
    }
}

/// The kind an expression denotes, determined from its head name
/// alone. `None` for unknown names.
pub fn static_kind(e: &Expr) -> Option<&'static str> {
    match e {
        Expr::Int(_) => Some("integer"),
        Expr::StrLit(_) => Some("string"),
        Expr::Call { name, .. } => match name.as_str() {
            "sigma_star" | "empty" | "finite" | "complement" | "oplus" | "times" | "prefix"
            | "shift_set" | "tower_gap_A0" | "tower_gap_A1" | "dedekind" => Some("language"),
            "identity_w" | "sigma_self_sum" | "sigma_self_product" | "shift" | "compose"
            | "oplus_w" | "times_w" | "swap_w" | "prepend_w" | "flip_w" | "broken_w"
            | "rank_witness" | "inverse_w" => Some("witness"),
            "prepend" | "append" | "identity_map" | "successor" | "empty_map" | "inverse_of" => {
                Some("map")
            }
            "collection" | "suffix_pairs" | "double_pairs" | "tag_pairs" | "const_pairs" => {
                Some("collection")
            }
            _ => None,
        },
    }
}

/// The documented DSL names, for the gallery listing.
pub fn documented_names() -> Vec<(&'static str, &'static str)> {
    vec![
        ("sigma_star(k)", "all strings over a size-k alphabet"),
        ("empty(k)", "the empty language"),
        ("finite([\"2:1\",...])", "an explicit finite language"),
        ("complement(L)", "complement within the alphabet"),
        ("oplus(L,R)", "tagged disjoint union"),
        ("times(L,R)", "pair-encoded product"),
        ("prefix(\"2:0\")", "strings with the given prefix"),
        ("shift_set(k,n)", "all strings minus the n least"),
        ("tower_gap_A0(k)", "lengths in the even tower bands"),
        ("tower_gap_A1(k)", "lengths in the odd tower bands"),
        ("dedekind(k)", "the tower-length tally set"),
        ("identity_w(L)", "identity witness L ~ L"),
        ("sigma_self_sum(k)", "halving witness onto the tagged double"),
        ("sigma_self_product(k)", "pairing witness onto the product"),
        ("shift(k,n)", "shift-by-n witness onto shift_set(k,n)"),
        ("compose(w1,w2)", "witness composition"),
        ("oplus_w(w1,w2)", "tagged sum of witnesses"),
        ("times_w(w1,w2)", "product of witnesses"),
        ("swap_w(L,R)", "tag-flip commutator witness"),
        ("prepend_w(k,t)", "prepend-tag witness onto tagged strings"),
        ("flip_w(k)", "leading-bit swap witness"),
        ("broken_w(k)", "deliberately failing witness fixture"),
        ("rank_witness(L[,probe])", "strong-rank witness L ~ sigma_star"),
        ("inverse_w(w)", "the witness read right-to-left"),
        ("prepend(\"2:0\")", "map prefixing a string, with inverse"),
        ("append(\"2:1\")", "map suffixing a string, with inverse"),
        ("identity_map(k)", "the identity map"),
        ("successor(k)", "rank successor map"),
        ("empty_map(k)", "the nowhere-defined map"),
        ("inverse_of(m)", "swap a map with its inverse"),
        ("collection(L,p=[..],q=[..])", "collection with honesty bounds"),
        ("suffix_pairs(k)", "slices {x.b}"),
        ("double_pairs(k)", "slices {x.x}"),
        ("tag_pairs(k)", "slices {1.x}"),
        ("const_pairs(k)", "non-disjoint fixture, every slice {0}"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_roundtrip() {
        let cases = [
            "sigma_star(2)",
            "oplus(sigma_star(2),finite([\"2:1\"]))",
            "compose(shift(2,1),shift(2,1))",
            "collection(suffix_pairs(2),p=[0,1,1],q=[2,1])",
            "times_w(identity_w(sigma_star(2)),flip_w(2))",
            "\"3:012\"",
            "42",
        ];
        for c in cases {
            let e = parse(c).unwrap();
            assert_eq!(e.to_string(), c);
            let e2 = parse(&e.to_string()).unwrap();
            assert_eq!(e, e2);
        }
    }

    #[test]
    fn parse_errors_carry_positions() {
        let e = parse("sigma_star(2").unwrap_err();
        assert!(e.position.is_some());
        let e = parse("sigma_star(2) trailing").unwrap_err();
        assert!(e.message.contains("trailing"));
    }

    #[test]
    fn eval_examples() {
        assert_eq!(
            eval(&parse("sigma_star(2)").unwrap()).unwrap().kind(),
            "language"
        );
        assert_eq!(
            eval(&parse("oplus(sigma_star(2),finite([\"2:1\"]))").unwrap())
                .unwrap()
                .kind(),
            "language"
        );
        // Witness-kinded by its head name, whatever evaluation later says.
        assert_eq!(
            static_kind(&parse("compose(shift(2,1),shift(2,1))").unwrap()),
            Some("witness")
        );
        assert!(eval(&parse("nonsense(1)").unwrap()).is_err());
        // Type error: a witness where a language is expected.
        assert!(eval(&parse("complement(flip_w(2))").unwrap()).is_err());
    }

    #[test]
    fn compose_shift_chain_evaluates() {
        // compose requires matching endpoints; shift(2,1) ends at
        // shift_set(2,1) while the second starts at sigma_star: the
        // endpoint mismatch surfaces as an evaluation error.
        let v = eval(&parse("compose(shift(2,1),shift(2,1))").unwrap());
        assert!(v.is_err());
        let v = eval(&parse("compose(identity_w(sigma_star(2)),shift(2,2))").unwrap()).unwrap();
        assert_eq!(v.kind(), "witness");
    }
}
