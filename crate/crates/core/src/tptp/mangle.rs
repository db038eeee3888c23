//! TPTP-compliant names.
//!
//! Every byte of a name's UTF-8 encoding outside `[a-zA-Z0-9]` becomes `_`
//! followed by two uppercase hex digits, so `ordinal_ordsucc` is written
//! `ordinal_5Fordsucc`. Symbols must start with a lowercase letter; names that
//! do not (and names starting with `u`, to keep the map injective) get a `u`
//! prefix.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnmangleError {
    #[error("malformed escape at byte {0} of `{1}`")]
    BadEscape(usize, String),
    #[error("`{0}` does not decode to UTF-8")]
    NotUtf8(String),
    #[error("`{0}` is not a mangled symbol")]
    NotMangled(String),
}

pub fn escape(name: &str) -> String {
    let mut out = String::with_capacity(name.len());
    for b in name.bytes() {
        if b.is_ascii_alphanumeric() {
            out.push(b as char);
        } else {
            out.push_str(&format!("_{:02X}", b));
        }
    }
    out
}

pub fn unescape(s: &str) -> Result<String, UnmangleError> {
    let bytes = s.as_bytes();
    let mut out = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if b == b'_' {
            let hex = s
                .get(i + 1..i + 3)
                .filter(|h| h.bytes().all(|c| matches!(c, b'0'..=b'9' | b'A'..=b'F')))
                .ok_or_else(|| UnmangleError::BadEscape(i, s.to_string()))?;
            out.push(u8::from_str_radix(hex, 16).expect("checked hex"));
            i += 3;
        } else if b.is_ascii_alphanumeric() {
            out.push(b);
            i += 1;
        } else {
            return Err(UnmangleError::BadEscape(i, s.to_string()));
        }
    }
    String::from_utf8(out).map_err(|_| UnmangleError::NotUtf8(s.to_string()))
}

/// The TPTP symbol for a constant.
pub fn mangle(name: &str) -> String {
    match name.bytes().next() {
        Some(c) if c.is_ascii_lowercase() && c != b'u' => escape(name),
        _ => format!("u{}", escape(name)),
    }
}

pub fn unmangle(symbol: &str) -> Result<String, UnmangleError> {
    let body = match symbol.strip_prefix('u') {
        Some(rest) => rest,
        None if symbol
            .bytes()
            .next()
            .is_some_and(|c| c.is_ascii_lowercase()) =>
        {
            symbol
        }
        None => return Err(UnmangleError::NotMangled(symbol.to_string())),
    };
    let name = unescape(body)?;
    // Reject spellings mangle would never produce.
    if mangle(&name) != symbol {
        return Err(UnmangleError::NotMangled(symbol.to_string()));
    }
    Ok(name)
}

/// Role tag of a formula name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormulaTag {
    /// A theorem or axiom of the development.
    Fact,
    /// A local hypothesis.
    Hyp,
    /// A definition axiom.
    Def,
    Conjecture,
    Type,
}

impl FormulaTag {
    pub fn prefix(self) -> &'static str {
        match self {
            FormulaTag::Fact => "axiom_",
            FormulaTag::Hyp => "axiom_c_",
            FormulaTag::Def => "axiom_d_",
            FormulaTag::Conjecture => "conj_",
            FormulaTag::Type => "type_",
        }
    }
}

/// `axiom_ordinal_5Fordsucc9`, `axiom_c_Ha16`.
pub fn formula_name(tag: FormulaTag, name: &str, ordinal: usize) -> String {
    format!("{}{}{}", tag.prefix(), escape(name), ordinal)
}

/// Recovers the original name from a formula name by stripping the role
/// prefix and ordinal suffix. Trailing digits may belong to the name, so
/// every split is tried and the first one accepted by `known` wins; with
/// no match the longest digit suffix is taken as the ordinal.
pub fn parse_formula_name(
    formula: &str,
    known: &dyn Fn(&str) -> bool,
) -> Option<(FormulaTag, String)> {
    let tags = [
        FormulaTag::Hyp,
        FormulaTag::Def,
        FormulaTag::Fact,
        FormulaTag::Conjecture,
        FormulaTag::Type,
    ];
    let mut fallback = None;
    for tag in tags {
        let Some(rest) = formula.strip_prefix(tag.prefix()) else {
            continue;
        };
        let digits = rest.bytes().rev().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            continue;
        }
        for cut in (rest.len() - digits..rest.len()).rev() {
            let Ok(name) = unescape(&rest[..cut]) else {
                continue;
            };
            if name.is_empty() {
                continue;
            }
            if known(&name) {
                return Some((tag, name));
            }
            if cut == rest.len() - digits && fallback.is_none() {
                fallback = Some((tag, name));
            }
        }
    }
    fallback
}
