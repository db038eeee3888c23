//! Names of the built-in constants shared by the kernel, the basis and the
//! printers.

use super::types::Type;

pub const EPS: &str = "Eps";
pub const IN: &str = "In";
pub const EMPTY: &str = "Empty";
pub const UNION: &str = "Union";
pub const POWER: &str = "Power";
pub const REPL: &str = "Repl";
pub const UNIV_OF: &str = "UnivOf";

pub const TRUE: &str = "True";
pub const FALSE: &str = "False";
pub const NOT: &str = "not";
pub const AND: &str = "and";
pub const OR: &str = "or";
pub const IFF: &str = "iff";
/// Existential and Leibniz equality at sets; other types use `ex_<slug>` / `eq_<slug>`.
pub const EX: &str = "ex";
pub const EQ: &str = "eq";

pub const XM: &str = "xm";
pub const DNEG: &str = "dneg";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PolyKind {
    Ex,
    Eq,
}

impl PolyKind {
    pub fn base(self) -> &'static str {
        match self {
            PolyKind::Ex => EX,
            PolyKind::Eq => EQ,
        }
    }
}

/// Name of the instance of a type-indexed connective at `ty`.
pub fn poly_name(kind: PolyKind, ty: &Type) -> String {
    match ty {
        Type::Set => kind.base().to_string(),
        _ => format!("{}_{}", kind.base(), ty.slug()),
    }
}

/// Inverse of [`poly_name`].
pub fn parse_poly_name(name: &str) -> Option<(PolyKind, Type)> {
    for kind in [PolyKind::Ex, PolyKind::Eq] {
        if name == kind.base() {
            return Some((kind, Type::Set));
        }
        if let Some(slug) = name
            .strip_prefix(kind.base())
            .and_then(|r| r.strip_prefix('_'))
        {
            match Type::from_slug(slug) {
                Some(Type::Set) | None => {}
                Some(ty) => return Some((kind, ty)),
            }
        }
    }
    None
}

/// The impredicatively defined connectives.
pub fn is_connective(name: &str) -> bool {
    matches!(name, TRUE | FALSE | NOT | AND | OR | IFF) || parse_poly_name(name).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_names_round_trip() {
        let t = Type::arrow(Type::Set, Type::Prop);
        assert_eq!(poly_name(PolyKind::Eq, &t), "eq_fio");
        assert_eq!(parse_poly_name("eq_fio"), Some((PolyKind::Eq, t)));
        assert_eq!(parse_poly_name("ex"), Some((PolyKind::Ex, Type::Set)));
        assert_eq!(parse_poly_name("eq_i"), None);
        assert_eq!(parse_poly_name("eq_x"), None);
        assert_eq!(parse_poly_name("equal"), None);
    }
}
