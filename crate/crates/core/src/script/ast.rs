use std::fmt;

use serde::{Deserialize, Serialize};

/// Half-open byte range into the source text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn to(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SType {
    Set,
    Prop,
    Arrow(Box<SType>, Box<SType>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SBinder {
    pub name: String,
    pub ty: Option<SType>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    Ident(String),
    Hole,
    App(Box<Expr>, Box<Expr>),
    Fun(Vec<SBinder>, Box<Expr>),
    Forall(Vec<SBinder>, Box<Expr>),
    Exists(Vec<SBinder>, Box<Expr>),
    Imp(Box<Expr>, Box<Expr>),
    Iff(Box<Expr>, Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Not(Box<Expr>),
    Eq(Box<Expr>, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl Expr {
    /// Head and arguments of an application spine.
    pub fn spine(&self) -> (&Expr, Vec<&Expr>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let ExprKind::App(f, a) = &cur.kind {
            args.push(a.as_ref());
            cur = f;
        }
        args.reverse();
        (cur, args)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TacticKind {
    Let(Vec<SBinder>),
    Assume(Vec<SBinder>),
    Exact(Expr),
    /// `apply head arg1 ... argn`
    Apply(Expr),
    RewriteAt {
        /// Equation proof: a hypothesis or theorem name, possibly applied.
        eq: Expr,
        /// 1-based occurrence; `None` rewrites every occurrence.
        occurrence: Option<u32>,
        reversed: bool,
    },
    Claim {
        name: String,
        prop: Expr,
        block: Option<Vec<Tactic>>,
    },
    Aby(Vec<String>),
    /// A bullet (`-`, `+`, `*`) or a brace block focusing the next goal.
    Bullet {
        marker: char,
        block: Vec<Tactic>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tactic {
    pub kind: TacticKind,
    pub span: Span,
}

impl Tactic {
    pub fn is_bullet(&self) -> bool {
        matches!(self.kind, TacticKind::Bullet { .. })
    }

    pub fn keyword(&self) -> &'static str {
        match self.kind {
            TacticKind::Let(_) => "let",
            TacticKind::Assume(_) => "assume",
            TacticKind::Exact(_) => "exact",
            TacticKind::Apply(_) => "apply",
            TacticKind::RewriteAt { .. } => "rewrite",
            TacticKind::Claim { .. } => "claim",
            TacticKind::Aby(_) => "aby",
            TacticKind::Bullet { .. } => "bullet",
        }
    }

    /// Nested tactic blocks.
    pub fn children(&self) -> &[Tactic] {
        match &self.kind {
            TacticKind::Claim { block: Some(b), .. } | TacticKind::Bullet { block: b, .. } => b,
            _ => &[],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ItemKind {
    Parameter {
        name: String,
        ty: SType,
    },
    Axiom {
        name: String,
        prop: Expr,
    },
    Definition {
        name: String,
        ty: Option<SType>,
        body: Expr,
    },
    TheoremDecl {
        name: String,
        prop: Expr,
        proof: Vec<Tactic>,
        /// Span of the closing `Qed.`
        qed: Span,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Item {
    pub kind: ItemKind,
    pub span: Span,
}

impl Item {
    pub fn name(&self) -> &str {
        match &self.kind {
            ItemKind::Parameter { name, .. }
            | ItemKind::Axiom { name, .. }
            | ItemKind::Definition { name, .. }
            | ItemKind::TheoremDecl { name, .. } => name,
        }
    }

    pub fn proof(&self) -> Option<&[Tactic]> {
        match &self.kind {
            ItemKind::TheoremDecl { proof, .. } => Some(proof),
            _ => None,
        }
    }
}

/// Visits every tactic in source order.
pub fn walk_tactics<'a>(tactics: &'a [Tactic], f: &mut dyn FnMut(&'a Tactic)) {
    for t in tactics {
        f(t);
        walk_tactics(t.children(), f);
    }
}

// ---- printing ----

impl fmt::Display for SType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SType::Set => write!(f, "set"),
            SType::Prop => write!(f, "prop"),
            SType::Arrow(a, b) => match **a {
                SType::Arrow(..) => write!(f, "({}) -> {}", a, b),
                _ => write!(f, "{} -> {}", a, b),
            },
        }
    }
}

fn binders(bs: &[SBinder]) -> String {
    bs.iter()
        .map(|b| match &b.ty {
            Some(t) => format!("({}:{})", b.name, t),
            None => b.name.clone(),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Fully parenthesized rendering; reparses to the same tree up to spans.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let paren = |e: &Expr| match e.kind {
            ExprKind::Ident(_) | ExprKind::Hole => e.to_string(),
            _ => format!("({})", e),
        };
        match &self.kind {
            ExprKind::Ident(x) => write!(f, "{}", x),
            ExprKind::Hole => write!(f, "_"),
            ExprKind::App(g, a) => match g.kind {
                ExprKind::App(..) | ExprKind::Ident(_) => write!(f, "{} {}", g, paren(a)),
                _ => write!(f, "{} {}", paren(g), paren(a)),
            },
            ExprKind::Fun(bs, body) => write!(f, "fun {} => {}", binders(bs), body),
            ExprKind::Forall(bs, body) => write!(f, "forall {}, {}", binders(bs), body),
            ExprKind::Exists(bs, body) => write!(f, "exists {}, {}", binders(bs), body),
            ExprKind::Imp(a, b) => write!(f, "{} -> {}", paren(a), paren(b)),
            ExprKind::Iff(a, b) => write!(f, "{} <-> {}", paren(a), paren(b)),
            ExprKind::And(a, b) => write!(f, "{} /\\ {}", paren(a), paren(b)),
            ExprKind::Or(a, b) => write!(f, "{} \\/ {}", paren(a), paren(b)),
            ExprKind::Not(a) => write!(f, "~{}", paren(a)),
            ExprKind::Eq(a, b) => write!(f, "{} = {}", paren(a), paren(b)),
        }
    }
}

fn write_block(out: &mut String, tactics: &[Tactic], indent: usize) {
    for t in tactics {
        write_tactic(out, t, indent);
    }
}

fn write_tactic(out: &mut String, t: &Tactic, indent: usize) {
    let pad = "  ".repeat(indent);
    match &t.kind {
        TacticKind::Let(bs) => out.push_str(&format!("{}let {}.\n", pad, binders(bs))),
        TacticKind::Assume(bs) => out.push_str(&format!("{}assume {}.\n", pad, binders(bs))),
        TacticKind::Exact(e) => out.push_str(&format!("{}exact {}.\n", pad, e)),
        TacticKind::Apply(e) => out.push_str(&format!("{}apply {}.\n", pad, e)),
        TacticKind::RewriteAt {
            eq,
            occurrence,
            reversed,
        } => {
            let arrow = if *reversed { "<- " } else { "" };
            let at = occurrence.map(|n| format!(" at {}", n)).unwrap_or_default();
            out.push_str(&format!("{}rewrite {}{}{}.\n", pad, arrow, eq, at));
        }
        TacticKind::Claim { name, prop, block } => {
            out.push_str(&format!("{}claim {}: {}.\n", pad, name, prop));
            if let Some(b) = block {
                out.push_str(&format!("{}{{\n", pad));
                write_block(out, b, indent + 1);
                out.push_str(&format!("{}}}\n", pad));
            }
        }
        TacticKind::Aby(deps) => {
            if deps.is_empty() {
                out.push_str(&format!("{}aby.\n", pad));
            } else {
                out.push_str(&format!("{}aby {}.\n", pad, deps.join(" ")));
            }
        }
        TacticKind::Bullet { marker: '{', block } => {
            out.push_str(&format!("{}{{\n", pad));
            write_block(out, block, indent + 1);
            out.push_str(&format!("{}}}\n", pad));
        }
        TacticKind::Bullet { marker, block } => {
            out.push_str(&format!("{}{}\n", pad, marker));
            write_block(out, block, indent + 1);
        }
    }
}

/// Renders items back to script text.
pub fn print_items(items: &[Item]) -> String {
    let mut out = String::new();
    for item in items {
        match &item.kind {
            ItemKind::Parameter { name, ty } => {
                out.push_str(&format!("Parameter {} : {}.\n", name, ty))
            }
            ItemKind::Axiom { name, prop } => {
                out.push_str(&format!("Axiom {} : {}.\n", name, prop))
            }
            ItemKind::Definition { name, ty, body } => match ty {
                Some(t) => out.push_str(&format!("Definition {} : {} := {}.\n", name, t, body)),
                None => out.push_str(&format!("Definition {} := {}.\n", name, body)),
            },
            ItemKind::TheoremDecl {
                name, prop, proof, ..
            } => {
                out.push_str(&format!("Theorem {} : {}.\n", name, prop));
                write_block(&mut out, proof, 0);
                out.push_str("Qed.\n");
            }
        }
        out.push('\n');
    }
    out
}
