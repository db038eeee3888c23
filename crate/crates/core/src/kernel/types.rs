use std::fmt;
use std::sync::Arc;

/// Simple types over one base sort of sets.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Type {
    /// The type of propositions.
    Prop,
    /// The type of sets.
    Set,
    Arrow(Arc<Type>, Arc<Type>),
}

impl Type {
    pub fn arrow(dom: Type, cod: Type) -> Type {
        Type::Arrow(Arc::new(dom), Arc::new(cod))
    }

    /// `a1 -> a2 -> ... -> res`
    pub fn arrows<I>(doms: I, res: Type) -> Type
    where
        I: IntoIterator<Item = Type>,
        I::IntoIter: DoubleEndedIterator,
    {
        doms.into_iter()
            .rev()
            .fold(res, |acc, d| Type::arrow(d, acc))
    }

    pub fn is_prop(&self) -> bool {
        matches!(self, Type::Prop)
    }

    /// Splits `a1 -> ... -> an -> r` into `([a1..an], r)` where `r` is not an arrow.
    pub fn uncurry(&self) -> (Vec<&Type>, &Type) {
        let mut doms = Vec::new();
        let mut cur = self;
        while let Type::Arrow(d, c) = cur {
            doms.push(d.as_ref());
            cur = c.as_ref();
        }
        (doms, cur)
    }

    pub fn order(&self) -> usize {
        match self {
            Type::Prop | Type::Set => 0,
            Type::Arrow(d, c) => (d.order() + 1).max(c.order()),
        }
    }

    /// Compact prefix encoding used to name per-type instances of polymorphic
    /// connectives: `i` for sets, `o` for props, `f<dom><cod>` for arrows.
    pub fn slug(&self) -> String {
        let mut out = String::new();
        self.write_slug(&mut out);
        out
    }

    fn write_slug(&self, out: &mut String) {
        match self {
            Type::Set => out.push('i'),
            Type::Prop => out.push('o'),
            Type::Arrow(d, c) => {
                out.push('f');
                d.write_slug(out);
                c.write_slug(out);
            }
        }
    }

    pub fn from_slug(s: &str) -> Option<Type> {
        fn go(chars: &mut std::str::Chars<'_>) -> Option<Type> {
            match chars.next()? {
                'i' => Some(Type::Set),
                'o' => Some(Type::Prop),
                'f' => {
                    let d = go(chars)?;
                    let c = go(chars)?;
                    Some(Type::arrow(d, c))
                }
                _ => None,
            }
        }
        let mut chars = s.chars();
        let ty = go(&mut chars)?;
        chars.next().is_none().then_some(ty)
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Prop => write!(f, "prop"),
            Type::Set => write!(f, "set"),
            Type::Arrow(d, c) => {
                if matches!(d.as_ref(), Type::Arrow(..)) {
                    write!(f, "({}) -> {}", d, c)
                } else {
                    write!(f, "{} -> {}", d, c)
                }
            }
        }
    }
}
