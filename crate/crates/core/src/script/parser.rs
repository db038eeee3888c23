use super::ast::*;
use super::error::{ScriptError, ScriptErrorKind};
use super::lexer::{lex, Tok, Token};

const TACTIC_KEYWORDS: &[&str] = &["let", "assume", "exact", "apply", "rewrite", "claim", "aby"];
const RESERVED: &[&str] = &[
    "fun",
    "forall",
    "exists",
    "set",
    "prop",
    "Theorem",
    "Definition",
    "Parameter",
    "Axiom",
    "Qed",
    "at",
];

/// Parses a whole script.
pub fn parse_script(text: &str) -> Result<Vec<Item>, ScriptError> {
    let toks = lex(text)?;
    let mut p = Parser { text, toks, pos: 0 };
    let mut items = Vec::new();
    while !p.at_end() {
        items.push(p.item()?);
    }
    Ok(items)
}

/// Parses a standalone expression, e.g. a proposition given on the command line.
pub fn parse_expr(text: &str) -> Result<Expr, ScriptError> {
    let toks = lex(text)?;
    let mut p = Parser { text, toks, pos: 0 };
    let e = p.expr()?;
    if !p.at_end() {
        return Err(p.error_here("trailing input after expression"));
    }
    Ok(e)
}

pub fn parse_type(text: &str) -> Result<SType, ScriptError> {
    let toks = lex(text)?;
    let mut p = Parser { text, toks, pos: 0 };
    let t = p.stype()?;
    if !p.at_end() {
        return Err(p.error_here("trailing input after type"));
    }
    Ok(t)
}

struct Parser<'a> {
    text: &'a str,
    toks: Vec<Token>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> Span {
        match self.toks.get(self.pos) {
            Some(t) => t.span,
            None => Span::new(self.text.len(), self.text.len()),
        }
    }

    fn prev_end(&self) -> usize {
        if self.pos == 0 {
            0
        } else {
            self.toks[self.pos - 1].span.end
        }
    }

    fn error(&self, kind: ScriptErrorKind, span: Span) -> ScriptError {
        ScriptError::new(kind, span, self.text)
    }

    fn error_here(&self, msg: &str) -> ScriptError {
        let found = match self.peek() {
            Some(t) => describe(t),
            None => "end of input".to_string(),
        };
        self.error(
            ScriptErrorKind::Syntax(format!("{} (found {})", msg, found)),
            self.here(),
        )
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        self.pos += 1;
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok, what: &str) -> Result<Span, ScriptError> {
        if self.peek() == Some(tok) {
            Ok(self.bump().span)
        } else {
            Err(self.error_here(&format!("expected {}", what)))
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.is_kw(kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Span), ScriptError> {
        match self.peek() {
            Some(Tok::Ident(s)) if !RESERVED.contains(&s.as_str()) => {
                let s = s.clone();
                let span = self.bump().span;
                Ok((s, span))
            }
            _ => Err(self.error_here(&format!("expected {}", what))),
        }
    }

    // ---- items ----

    fn item(&mut self) -> Result<Item, ScriptError> {
        let start = self.here().start;
        let kind = if self.eat_kw("Parameter") {
            let (name, _) = self.ident("parameter name")?;
            self.expect(&Tok::Colon, "`:`")?;
            let ty = self.stype()?;
            ItemKind::Parameter { name, ty }
        } else if self.eat_kw("Axiom") {
            let (name, _) = self.ident("axiom name")?;
            self.expect(&Tok::Colon, "`:`")?;
            let prop = self.expr()?;
            ItemKind::Axiom { name, prop }
        } else if self.eat_kw("Definition") {
            let (name, _) = self.ident("definition name")?;
            let ty = if self.eat(&Tok::Colon) {
                Some(self.stype()?)
            } else {
                None
            };
            self.expect(&Tok::ColonEq, "`:=`")?;
            let body = self.expr()?;
            ItemKind::Definition { name, ty, body }
        } else if self.eat_kw("Theorem") || self.eat_kw("Lemma") {
            let (name, _) = self.ident("theorem name")?;
            self.expect(&Tok::Colon, "`:`")?;
            let prop = self.expr()?;
            self.expect(&Tok::Dot, "`.` after theorem statement")?;
            let proof = self.tactics_until_qed()?;
            let qstart = self.here().start;
            if !self.eat_kw("Qed") {
                return Err(self.error_here("expected `Qed`"));
            }
            self.expect(&Tok::Dot, "`.` after Qed")?;
            let qed = Span::new(qstart, self.prev_end());
            return Ok(Item {
                kind: ItemKind::TheoremDecl {
                    name,
                    prop,
                    proof,
                    qed,
                },
                span: Span::new(start, self.prev_end()),
            });
        } else {
            return Err(self.error_here("expected `Theorem`, `Definition`, `Parameter` or `Axiom`"));
        };
        self.expect(&Tok::Dot, "`.`")?;
        Ok(Item {
            kind,
            span: Span::new(start, self.prev_end()),
        })
    }

    // ---- tactics ----

    /// Top-level proof body: tactics with bullets until `Qed`.
    fn tactics_until_qed(&mut self) -> Result<Vec<Tactic>, ScriptError> {
        let mut markers = Vec::new();
        let block = self.bullet_block(&mut markers, &|p| p.is_kw("Qed") || p.at_end())?;
        if self.at_end() {
            return Err(self.error(
                ScriptErrorKind::UnbalancedBlock("missing `Qed`".into()),
                self.here(),
            ));
        }
        Ok(block)
    }

    /// A sequence of tactics in which bullets open nested sub-blocks. A bullet
    /// with the marker of an enclosing level ends the current sub-block.
    fn bullet_block(
        &mut self,
        markers: &mut Vec<char>,
        stop: &dyn Fn(&Self) -> bool,
    ) -> Result<Vec<Tactic>, ScriptError> {
        let mut out = Vec::new();
        loop {
            if stop(self) {
                return Ok(out);
            }
            if let Some(Tok::Bullet(m)) = self.peek() {
                let m = *m;
                if markers.contains(&m) {
                    // sibling or ancestor bullet: close this level
                    return Ok(out);
                }
                let bspan = self.bump().span;
                markers.push(m);
                let block = self.bullet_block(markers, stop);
                markers.pop();
                let block = block?;
                let end = block.last().map(|t| t.span.end).unwrap_or(bspan.end);
                out.push(Tactic {
                    kind: TacticKind::Bullet { marker: m, block },
                    span: Span::new(bspan.start, end),
                });
                // subsequent bullets with the same marker are siblings
                while let Some(Tok::Bullet(m2)) = self.peek() {
                    if *m2 != m {
                        break;
                    }
                    let bspan = self.bump().span;
                    markers.push(m);
                    let block = self.bullet_block(markers, stop);
                    markers.pop();
                    let block = block?;
                    let end = block.last().map(|t| t.span.end).unwrap_or(bspan.end);
                    out.push(Tactic {
                        kind: TacticKind::Bullet { marker: m, block },
                        span: Span::new(bspan.start, end),
                    });
                }
                continue;
            }
            if self.peek() == Some(&Tok::LBrace) {
                out.push(self.brace_block('{')?);
                continue;
            }
            if self.peek() == Some(&Tok::RBrace) {
                return Err(self.error(
                    ScriptErrorKind::UnbalancedBlock("unexpected `}`".into()),
                    self.here(),
                ));
            }
            out.push(self.tactic()?);
        }
    }

    fn brace_block(&mut self, marker: char) -> Result<Tactic, ScriptError> {
        let open = self.expect(&Tok::LBrace, "`{`")?;
        let mut markers = Vec::new();
        let block = self.bullet_block(&mut markers, &|p| {
            p.peek() == Some(&Tok::RBrace) || p.at_end() || p.is_kw("Qed")
        })?;
        if self.peek() != Some(&Tok::RBrace) {
            return Err(self.error(
                ScriptErrorKind::UnbalancedBlock("unclosed `{`".into()),
                open,
            ));
        }
        let close = self.bump().span;
        Ok(Tactic {
            kind: TacticKind::Bullet { marker, block },
            span: open.to(close),
        })
    }

    fn tactic(&mut self) -> Result<Tactic, ScriptError> {
        let start = self.here().start;
        let kw = match self.peek() {
            Some(Tok::Ident(s)) if TACTIC_KEYWORDS.contains(&s.as_str()) => s.clone(),
            _ => return Err(self.error_here("expected a tactic")),
        };
        self.pos += 1;
        let kind = match kw.as_str() {
            "let" => TacticKind::Let(self.binder_list(&Tok::Dot)?),
            "assume" => {
                let mut names = Vec::new();
                while let Some(Tok::Ident(_)) = self.peek() {
                    let (name, span) = self.ident("hypothesis name")?;
                    names.push(SBinder {
                        name,
                        ty: None,
                        span,
                    });
                }
                if names.is_empty() {
                    return Err(self.error_here("expected hypothesis name"));
                }
                TacticKind::Assume(names)
            }
            "exact" => TacticKind::Exact(self.expr()?),
            "apply" => TacticKind::Apply(self.expr()?),
            "rewrite" => {
                let reversed = self.eat(&Tok::BackArrow);
                let eq = self.app_expr()?;
                let occurrence = if self.eat_kw("at") {
                    match self.peek() {
                        Some(Tok::Num(n)) if *n > 0 => {
                            let n = *n;
                            self.pos += 1;
                            Some(n)
                        }
                        _ => return Err(self.error_here("expected a positive occurrence number")),
                    }
                } else {
                    None
                };
                TacticKind::RewriteAt {
                    eq,
                    occurrence,
                    reversed,
                }
            }
            "claim" => {
                let (name, _) = self.ident("claim label")?;
                self.expect(&Tok::Colon, "`:`")?;
                let prop = self.expr()?;
                self.expect(&Tok::Dot, "`.`")?;
                let block = if self.peek() == Some(&Tok::LBrace) {
                    let b = self.brace_block('{')?;
                    match b.kind {
                        TacticKind::Bullet { block, .. } => Some(block),
                        _ => unreachable!(),
                    }
                } else {
                    None
                };
                return Ok(Tactic {
                    kind: TacticKind::Claim { name, prop, block },
                    span: Span::new(start, self.prev_end()),
                });
            }
            "aby" => {
                let mut deps = Vec::new();
                while let Some(Tok::Ident(_)) = self.peek() {
                    deps.push(self.ident("dependency name")?.0);
                }
                TacticKind::Aby(deps)
            }
            _ => unreachable!(),
        };
        self.expect(&Tok::Dot, "`.` after tactic")?;
        Ok(Tactic {
            kind,
            span: Span::new(start, self.prev_end()),
        })
    }

    /// Binders for `let`: `x y`, `x y : T` or `(x y : T) (z : U)`.
    fn binder_list(&mut self, terminator: &Tok) -> Result<Vec<SBinder>, ScriptError> {
        let mut out = Vec::new();
        loop {
            match self.peek() {
                Some(Tok::LParen) => {
                    self.pos += 1;
                    let mut group = Vec::new();
                    while let Some(Tok::Ident(_)) = self.peek() {
                        let (n, s) = self.ident("binder name")?;
                        group.push((n, s));
                    }
                    if group.is_empty() {
                        return Err(self.error_here("expected binder name"));
                    }
                    self.expect(&Tok::Colon, "`:` in binder group")?;
                    let ty = self.stype()?;
                    self.expect(&Tok::RParen, "`)`")?;
                    for (name, span) in group {
                        out.push(SBinder {
                            name,
                            ty: Some(ty.clone()),
                            span,
                        });
                    }
                }
                Some(Tok::Ident(s)) if !RESERVED.contains(&s.as_str()) => {
                    let (name, span) = self.ident("binder name")?;
                    out.push(SBinder {
                        name,
                        ty: None,
                        span,
                    });
                }
                Some(Tok::Colon) if !out.is_empty() => {
                    self.pos += 1;
                    let ty = self.stype()?;
                    for b in out.iter_mut().rev() {
                        if b.ty.is_some() {
                            break;
                        }
                        b.ty = Some(ty.clone());
                    }
                }
                Some(t) if t == terminator => break,
                _ => return Err(self.error_here("expected binder")),
            }
        }
        if out.is_empty() {
            return Err(self.error_here("expected at least one binder"));
        }
        Ok(out)
    }

    // ---- types ----

    fn stype(&mut self) -> Result<SType, ScriptError> {
        let dom = self.stype_atom()?;
        if self.eat(&Tok::Arrow) {
            let cod = self.stype()?;
            Ok(SType::Arrow(Box::new(dom), Box::new(cod)))
        } else {
            Ok(dom)
        }
    }

    fn stype_atom(&mut self) -> Result<SType, ScriptError> {
        if self.eat(&Tok::LParen) {
            let t = self.stype()?;
            self.expect(&Tok::RParen, "`)`")?;
            return Ok(t);
        }
        if self.eat_kw("set") {
            return Ok(SType::Set);
        }
        if self.eat_kw("prop") {
            return Ok(SType::Prop);
        }
        Err(self.error_here("expected a type (`set`, `prop` or an arrow)"))
    }

    // ---- expressions ----

    pub fn expr(&mut self) -> Result<Expr, ScriptError> {
        let start = self.here().start;
        for (kw, mk) in [("fun", 0u8), ("forall", 1), ("exists", 2)] {
            if self.eat_kw(kw) {
                let sep_is_fat = mk == 0;
                let binders = self.quant_binders(sep_is_fat)?;
                let body = self.expr()?;
                let span = Span::new(start, body.span.end);
                let body = Box::new(body);
                let kind = match mk {
                    0 => ExprKind::Fun(binders, body),
                    1 => ExprKind::Forall(binders, body),
                    _ => ExprKind::Exists(binders, body),
                };
                return Ok(Expr { kind, span });
            }
        }
        self.iff_expr()
    }

    /// Binders followed by `,` (quantifiers) or `=>`/`.` (lambdas).
    fn quant_binders(&mut self, fun: bool) -> Result<Vec<SBinder>, ScriptError> {
        let mut out = Vec::new();
        loop {
            match self.peek() {
                Some(Tok::Comma) if !fun => {
                    self.pos += 1;
                    break;
                }
                Some(Tok::FatArrow) | Some(Tok::Dot) if fun => {
                    self.pos += 1;
                    break;
                }
                Some(Tok::LParen) => {
                    self.pos += 1;
                    let mut group = Vec::new();
                    while let Some(Tok::Ident(_)) = self.peek() {
                        group.push(self.ident("binder name")?);
                    }
                    if group.is_empty() {
                        return Err(self.error_here("expected binder name"));
                    }
                    self.expect(&Tok::Colon, "`:` in binder group")?;
                    let ty = self.stype()?;
                    self.expect(&Tok::RParen, "`)`")?;
                    for (name, span) in group {
                        out.push(SBinder {
                            name,
                            ty: Some(ty.clone()),
                            span,
                        });
                    }
                }
                Some(Tok::Ident(s)) if !RESERVED.contains(&s.as_str()) => {
                    let (name, span) = self.ident("binder name")?;
                    out.push(SBinder {
                        name,
                        ty: None,
                        span,
                    });
                }
                Some(Tok::Colon) if !out.is_empty() => {
                    self.pos += 1;
                    let ty = self.stype()?;
                    for b in out.iter_mut().rev() {
                        if b.ty.is_some() {
                            break;
                        }
                        b.ty = Some(ty.clone());
                    }
                }
                _ => {
                    let sep = if fun { "`=>`" } else { "`,`" };
                    return Err(self.error_here(&format!("expected binder or {}", sep)));
                }
            }
        }
        if out.is_empty() {
            return Err(self.error_here("expected at least one binder"));
        }
        Ok(out)
    }

    fn binop(&mut self, lhs: Expr, rhs: Expr, mk: fn(Box<Expr>, Box<Expr>) -> ExprKind) -> Expr {
        let span = lhs.span.to(rhs.span);
        Expr {
            kind: mk(Box::new(lhs), Box::new(rhs)),
            span,
        }
    }

    /// Operand that may itself be a binder, extending to the right.
    fn rhs_or_binder(
        &mut self,
        f: fn(&mut Self) -> Result<Expr, ScriptError>,
    ) -> Result<Expr, ScriptError> {
        if self.is_kw("fun") || self.is_kw("forall") || self.is_kw("exists") {
            self.expr()
        } else {
            f(self)
        }
    }

    fn iff_expr(&mut self) -> Result<Expr, ScriptError> {
        let lhs = self.imp_expr()?;
        if self.eat(&Tok::Iff) {
            let rhs = self.rhs_or_binder(Self::imp_expr)?;
            return Ok(self.binop(lhs, rhs, ExprKind::Iff));
        }
        Ok(lhs)
    }

    fn imp_expr(&mut self) -> Result<Expr, ScriptError> {
        let lhs = self.or_expr()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.rhs_or_binder(Self::imp_expr)?;
            return Ok(self.binop(lhs, rhs, ExprKind::Imp));
        }
        Ok(lhs)
    }

    fn or_expr(&mut self) -> Result<Expr, ScriptError> {
        let lhs = self.and_expr()?;
        if self.eat(&Tok::Or) {
            let rhs = self.rhs_or_binder(Self::or_expr)?;
            return Ok(self.binop(lhs, rhs, ExprKind::Or));
        }
        Ok(lhs)
    }

    fn and_expr(&mut self) -> Result<Expr, ScriptError> {
        let lhs = self.eq_expr()?;
        if self.eat(&Tok::And) {
            let rhs = self.rhs_or_binder(Self::and_expr)?;
            return Ok(self.binop(lhs, rhs, ExprKind::And));
        }
        Ok(lhs)
    }

    fn eq_expr(&mut self) -> Result<Expr, ScriptError> {
        let lhs = self.not_expr()?;
        if self.eat(&Tok::Eq) {
            let rhs = self.not_expr()?;
            return Ok(self.binop(lhs, rhs, ExprKind::Eq));
        }
        Ok(lhs)
    }

    fn not_expr(&mut self) -> Result<Expr, ScriptError> {
        if self.peek() == Some(&Tok::Tilde) {
            let start = self.bump().span.start;
            let inner = self.rhs_or_binder(Self::not_expr)?;
            let span = Span::new(start, inner.span.end);
            return Ok(Expr {
                kind: ExprKind::Not(Box::new(inner)),
                span,
            });
        }
        self.app_expr()
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                !RESERVED.contains(&s.as_str()) || s == "fun" || s == "forall" || s == "exists"
            }
            Some(Tok::LParen) | Some(Tok::Underscore) => true,
            _ => false,
        }
    }

    fn app_expr(&mut self) -> Result<Expr, ScriptError> {
        let mut e = self.atom()?;
        while self.starts_atom() {
            if self.is_kw("fun") || self.is_kw("forall") || self.is_kw("exists") {
                // trailing binder argument: `f fun x => ...`
                let arg = self.expr()?;
                e = self.binop(e, arg, ExprKind::App);
                break;
            }
            let arg = self.atom()?;
            e = self.binop(e, arg, ExprKind::App);
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<Expr, ScriptError> {
        match self.peek() {
            Some(Tok::LParen) => {
                let start = self.bump().span.start;
                let mut e = self.expr()?;
                let end = self.expect(&Tok::RParen, "`)`")?.end;
                e.span = Span::new(start, end);
                Ok(e)
            }
            Some(Tok::Underscore) => {
                let span = self.bump().span;
                Ok(Expr {
                    kind: ExprKind::Hole,
                    span,
                })
            }
            Some(Tok::Ident(_)) => {
                let (name, span) = self.ident("identifier")?;
                Ok(Expr {
                    kind: ExprKind::Ident(name),
                    span,
                })
            }
            _ => Err(self.error_here("expected an expression")),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{}`", s),
        Tok::Num(n) => format!("`{}`", n),
        Tok::Dot => "`.`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Colon => "`:`".into(),
        Tok::ColonEq => "`:=`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::LBrace => "`{`".into(),
        Tok::RBrace => "`}`".into(),
        Tok::FatArrow => "`=>`".into(),
        Tok::Arrow => "`->`".into(),
        Tok::BackArrow => "`<-`".into(),
        Tok::Iff => "`<->`".into(),
        Tok::And => "`/\\`".into(),
        Tok::Or => "`\\/`".into(),
        Tok::Tilde => "`~`".into(),
        Tok::Eq => "`=`".into(),
        Tok::Underscore => "`_`".into(),
        Tok::Bullet(c) => format!("`{}`", c),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strip(e: &Expr) -> String {
        e.to_string()
    }

    #[test]
    fn precedence() {
        let e = parse_expr("A /\\ B \\/ C -> D <-> E").unwrap();
        assert_eq!(strip(&e), "(((A /\\ B) \\/ C) -> D) <-> E");
        let e = parse_expr("~ In x y -> x = y").unwrap();
        assert_eq!(strip(&e), "(~(In x y)) -> (x = y)");
        let e = parse_expr("A -> B -> C").unwrap();
        assert_eq!(strip(&e), "A -> (B -> C)");
    }

    #[test]
    fn binders() {
        let e = parse_expr("forall x y:set, x = y").unwrap();
        match &e.kind {
            ExprKind::Forall(bs, _) => {
                assert_eq!(bs.len(), 2);
                assert!(bs.iter().all(|b| b.ty == Some(SType::Set)));
            }
            _ => panic!(),
        }
        let e = parse_expr("fun (P:set -> prop) x => P x").unwrap();
        assert_eq!(strip(&e), "fun (P:set -> prop) x => P x");
        let e = parse_expr("A -> forall x, P x").unwrap();
        assert_eq!(strip(&e), "A -> (forall x, P x)");
        let e = parse_expr("fun x. f x").unwrap();
        assert!(matches!(e.kind, ExprKind::Fun(..)));
    }

    #[test]
    fn printer_output_reparses() {
        let src = "forall x0:set, exists y:set, In x0 y /\\ ~(x0 = y)";
        let e = parse_expr(src).unwrap();
        let again = parse_expr(&e.to_string()).unwrap();
        assert_eq!(e.to_string(), again.to_string());
    }

    #[test]
    fn theorem_with_bullets_and_blocks() {
        let src = "Theorem t : A -> A /\\ A.\n\
                   assume H.\n\
                   apply andI.\n\
                   - exact H.\n\
                   - { exact H. }\n\
                   Qed.";
        let items = parse_script(src).unwrap();
        assert_eq!(items.len(), 1);
        let proof = items[0].proof().unwrap();
        assert_eq!(proof.len(), 4);
        assert!(proof[2].is_bullet());
        assert!(proof[3].is_bullet());
        assert_eq!(proof[3].children().len(), 1);
        let mut n = 0;
        walk_tactics(proof, &mut |_| n += 1);
        assert_eq!(n, 7);
    }

    #[test]
    fn nested_bullets() {
        let src =
            "Theorem t : P.\napply f.\n- apply g.\n  + exact a.\n  + exact b.\n- exact c.\nQed.";
        let items = parse_script(src).unwrap();
        let proof = items[0].proof().unwrap();
        assert_eq!(proof.len(), 3);
        assert_eq!(proof[1].children().len(), 3);
        assert_eq!(proof[2].children().len(), 1);
    }

    #[test]
    fn rewrite_and_claim() {
        let src =
            "Theorem t : P.\nrewrite <- H2 a at 2.\nclaim L: Q. { aby H1 foo. }\nexact L.\nQed.";
        let items = parse_script(src).unwrap();
        let proof = items[0].proof().unwrap();
        match &proof[0].kind {
            TacticKind::RewriteAt {
                occurrence,
                reversed,
                eq,
            } => {
                assert_eq!(*occurrence, Some(2));
                assert!(*reversed);
                assert_eq!(eq.to_string(), "H2 a");
            }
            k => panic!("{:?}", k),
        }
        match &proof[1].kind {
            TacticKind::Claim { name, block, .. } => {
                assert_eq!(name, "L");
                assert_eq!(block.as_ref().unwrap().len(), 1);
            }
            k => panic!("{:?}", k),
        }
        assert_eq!(
            &src[proof[0].span.start..proof[0].span.end],
            "rewrite <- H2 a at 2."
        );
    }

    #[test]
    fn items_round_trip_through_printer() {
        let src = "Parameter nat : set.\nAxiom ax : forall x, In x nat.\n\
                   Definition d : set -> prop := fun x => In x nat.\n\
                   Theorem t : forall x, d x.\nlet x.\nexact ax x.\nQed.\n";
        let items = parse_script(src).unwrap();
        let printed = print_items(&items);
        let again = parse_script(&printed).unwrap();
        assert_eq!(print_items(&again), printed);
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_script("Theorem t : P.\nexact .\nQed.").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(matches!(err.kind, ScriptErrorKind::Syntax(_)));
        let err = parse_script("Theorem t : P.\n{ exact H.\nQed.").unwrap_err();
        assert!(matches!(err.kind, ScriptErrorKind::UnbalancedBlock(_)));
        let err = parse_script("Theorem t : P.\nexact H.").unwrap_err();
        assert!(matches!(err.kind, ScriptErrorKind::UnbalancedBlock(_)));
    }
}
