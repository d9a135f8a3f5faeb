use std::fmt;
use std::rc::Rc;

use thiserror::Error;

use super::lexer::{SpannedToken, Token};
use super::syntax::{Decl, Expr, ExprKind, LamBinder, Module, Name};
use crate::mode::{Icit, Mode};
use crate::span::SourceSpan;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub struct ParseError {
    pub span: SourceSpan,
    /// `None` when the input ended early.
    pub found: Option<Token>,
    pub expected: Vec<&'static str>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.found {
            Some(tok) => write!(f, "unexpected `{tok}`")?,
            None => write!(f, "unexpected end of input")?,
        }
        if !self.expected.is_empty() {
            write!(f, ", expected {}", self.expected.join(" or "))?;
        }
        Ok(())
    }
}

type PResult<T> = Result<T, ParseError>;

struct Parser<'t> {
    tokens: &'t [SpannedToken],
    pos: usize,
}

/// A parenthesised or braced binder group of a Π/Σ type: `(x y :0 A)`.
struct Group {
    names: Vec<(Name, SourceSpan)>,
    mode: Mode,
    icit: Icit,
    ty: Expr,
    start: SourceSpan,
}

pub fn parse_module(tokens: &[SpannedToken]) -> PResult<Module> {
    let mut p = Parser { tokens, pos: 0 };
    let mut decls = Vec::new();
    let mut main = None;
    loop {
        match p.peek() {
            Some(Token::Let) => decls.push(p.decl()?),
            Some(Token::Main) => {
                p.bump();
                p.expect(Token::Equals, "`=`")?;
                main = Some(p.term()?);
                p.eat(&Token::Semi);
                if p.peek().is_some() {
                    return Err(p.error(&["end of input"]));
                }
                break;
            }
            None => break,
            Some(_) => return Err(p.error(&["`let`", "`main`", "end of input"])),
        }
    }
    Ok(Module { decls, main })
}

/// Parses a single expression spanning the whole token stream.
pub fn parse_expr(tokens: &[SpannedToken]) -> PResult<Expr> {
    let mut p = Parser { tokens, pos: 0 };
    let e = p.term()?;
    if p.peek().is_some() {
        return Err(p.error(&["end of input"]));
    }
    Ok(e)
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|t| &t.token)
    }

    fn peek_at(&self, offset: usize) -> Option<&Token> {
        self.tokens.get(self.pos + offset).map(|t| &t.token)
    }

    fn bump(&mut self) -> &SpannedToken {
        let t = &self.tokens[self.pos];
        self.pos += 1;
        t
    }

    fn eat(&mut self, tok: &Token) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn here(&self) -> SourceSpan {
        match self.tokens.get(self.pos) {
            Some(t) => t.span.clone(),
            None => self
                .tokens
                .last()
                .map(|t| t.span.clone())
                .unwrap_or_else(SourceSpan::dummy),
        }
    }

    fn prev_span(&self) -> SourceSpan {
        self.tokens[self.pos - 1].span.clone()
    }

    fn span_from(&self, start: &SourceSpan) -> SourceSpan {
        start.to(&self.prev_span())
    }

    fn error(&self, expected: &[&'static str]) -> ParseError {
        ParseError {
            span: self.here(),
            found: self.peek().cloned(),
            expected: expected.to_vec(),
        }
    }

    fn expect(&mut self, tok: Token, what: &'static str) -> PResult<SourceSpan> {
        if self.peek() == Some(&tok) {
            Ok(self.bump().span.clone())
        } else {
            Err(self.error(&[what]))
        }
    }

    fn ident(&mut self) -> PResult<(Name, SourceSpan)> {
        match self.peek() {
            Some(Token::Ident(x)) => {
                let x = x.clone();
                Ok((x, self.bump().span.clone()))
            }
            _ => Err(self.error(&["identifier"])),
        }
    }

    fn binder_name(&mut self) -> PResult<(Name, SourceSpan)> {
        if self.peek() == Some(&Token::Underscore) {
            let span = self.bump().span.clone();
            return Ok((Rc::from("_"), span));
        }
        self.ident()
    }

    fn is_binder_name(tok: Option<&Token>) -> bool {
        matches!(tok, Some(Token::Ident(_) | Token::Underscore))
    }

    fn decl(&mut self) -> PResult<Decl> {
        self.expect(Token::Let, "`let`")?;
        let (name, name_span) = self.ident()?;
        self.expect(Token::Colon, "`:`")?;
        let ty = self.term()?;
        self.expect(Token::Equals, "`=`")?;
        let body = self.term()?;
        self.expect(Token::Semi, "`;`")?;
        Ok(Decl {
            name,
            name_span,
            ty,
            body,
        })
    }

    fn term(&mut self) -> PResult<Expr> {
        match self.peek() {
            Some(Token::Backslash) => self.lambda(),
            Some(Token::Let) => self.local_let(),
            _ => self.arrow(),
        }
    }

    fn lambda(&mut self) -> PResult<Expr> {
        let start = self.expect(Token::Backslash, "`\\`")?;
        let mut binders = Vec::new();
        loop {
            match self.peek() {
                Some(Token::Dot) if !binders.is_empty() => {
                    self.bump();
                    break;
                }
                Some(Token::Ident(_) | Token::Underscore) => {
                    let (name, _) = self.binder_name()?;
                    binders.push(LamBinder {
                        name,
                        icit: Icit::Expl,
                        mode: None,
                        ann: None,
                    });
                }
                Some(Token::LBrace) => {
                    self.bump();
                    let (name, _) = self.binder_name()?;
                    let (mode, ann) = if self.peek() == Some(&Token::RBrace) {
                        (None, None)
                    } else {
                        let mode = self.colon()?;
                        (Some(mode), Some(Box::new(self.term()?)))
                    };
                    self.expect(Token::RBrace, "`}`")?;
                    binders.push(LamBinder {
                        name,
                        icit: Icit::Impl,
                        mode,
                        ann,
                    });
                }
                Some(Token::LParen) => {
                    self.bump();
                    let (name, _) = self.binder_name()?;
                    let mode = self.colon()?;
                    let ann = self.term()?;
                    self.expect(Token::RParen, "`)`")?;
                    binders.push(LamBinder {
                        name,
                        icit: Icit::Expl,
                        mode: Some(mode),
                        ann: Some(Box::new(ann)),
                    });
                }
                _ if binders.is_empty() => return Err(self.error(&["binder"])),
                _ => return Err(self.error(&["binder", "`.`"])),
            }
        }
        let body = self.term()?;
        let span = self.span_from(&start);
        Ok(binders.into_iter().rev().fold(body, |body, binder| {
            Expr::new(span.clone(), ExprKind::Lam(binder, Box::new(body)))
        }))
    }

    fn colon(&mut self) -> PResult<Mode> {
        match self.peek() {
            Some(Token::Colon) => {
                self.bump();
                Ok(Mode::Omega)
            }
            Some(Token::ColonZero) => {
                self.bump();
                Ok(Mode::Zero)
            }
            _ => Err(self.error(&["`:`", "`:0`"])),
        }
    }

    fn local_let(&mut self) -> PResult<Expr> {
        let start = self.expect(Token::Let, "`let`")?;
        let (name, _) = self.binder_name()?;
        self.expect(Token::Colon, "`:`")?;
        let ty = self.term()?;
        self.expect(Token::Equals, "`=`")?;
        let def = self.term()?;
        self.expect(Token::In, "`in`")?;
        let body = self.term()?;
        Ok(Expr::new(
            self.span_from(&start),
            ExprKind::Let(name, Box::new(ty), Box::new(def), Box::new(body)),
        ))
    }

    fn group(&mut self) -> PResult<Group> {
        let start = self.here();
        let (icit, close, close_what) = match self.peek() {
            Some(Token::LParen) => (Icit::Expl, Token::RParen, "`)`"),
            Some(Token::LBrace) => (Icit::Impl, Token::RBrace, "`}`"),
            _ => return Err(self.error(&["`(`", "`{`"])),
        };
        self.bump();
        let mut names = vec![self.binder_name()?];
        while Self::is_binder_name(self.peek()) {
            names.push(self.binder_name()?);
        }
        let mode = self.colon()?;
        let ty = self.term()?;
        self.expect(close, close_what)?;
        Ok(Group {
            names,
            mode,
            icit,
            ty,
            start,
        })
    }

    fn at_group_start(&self) -> bool {
        matches!(self.peek(), Some(Token::LParen | Token::LBrace))
            && Self::is_binder_name(self.peek_at(1))
    }

    /// Binder groups followed by `->`, or `None` (with the position restored).
    fn try_pi_groups(&mut self) -> Option<Vec<Group>> {
        if !self.at_group_start() {
            return None;
        }
        let saved = self.pos;
        let mut groups = Vec::new();
        while self.at_group_start() {
            match self.group() {
                Ok(g) => groups.push(g),
                Err(_) => {
                    self.pos = saved;
                    return None;
                }
            }
        }
        if self.eat(&Token::Arrow) {
            Some(groups)
        } else {
            self.pos = saved;
            None
        }
    }

    fn arrow(&mut self) -> PResult<Expr> {
        if let Some(groups) = self.try_pi_groups() {
            let codomain = self.term()?;
            let end = self.prev_span();
            let mut result = codomain;
            for g in groups.into_iter().rev() {
                let span = g.start.to(&end);
                for (name, _) in g.names.into_iter().rev() {
                    result = Expr::new(
                        span.clone(),
                        ExprKind::Pi(name, g.mode, g.icit, Box::new(g.ty.clone()), Box::new(result)),
                    );
                }
            }
            return Ok(result);
        }
        let start = self.here();
        let lhs = self.sigma()?;
        if self.eat(&Token::Arrow) {
            let rhs = self.term()?;
            return Ok(Expr::new(
                self.span_from(&start),
                ExprKind::Pi(Rc::from("_"), Mode::Omega, Icit::Expl, Box::new(lhs), Box::new(rhs)),
            ));
        }
        Ok(lhs)
    }

    fn sigma(&mut self) -> PResult<Expr> {
        let start = self.here();
        if self.peek() == Some(&Token::LParen) && Self::is_binder_name(self.peek_at(1)) {
            let saved = self.pos;
            if let Ok(g) = self.group() {
                if g.names.len() == 1 && self.eat(&Token::Star) {
                    let rhs = self.sigma()?;
                    let (name, _) = g.names.into_iter().next().unwrap();
                    return Ok(Expr::new(
                        self.span_from(&start),
                        ExprKind::Sigma(name, g.mode, Box::new(g.ty), Box::new(rhs)),
                    ));
                }
            }
            self.pos = saved;
        }
        let lhs = self.app()?;
        if self.eat(&Token::Star) {
            let rhs = self.sigma()?;
            return Ok(Expr::new(
                self.span_from(&start),
                ExprKind::Sigma(Rc::from("_"), Mode::Omega, Box::new(lhs), Box::new(rhs)),
            ));
        }
        Ok(lhs)
    }

    fn at_atom_start(&self) -> bool {
        matches!(
            self.peek(),
            Some(
                Token::Ident(_)
                    | Token::Num(_)
                    | Token::Univ
                    | Token::Nat
                    | Token::Bool
                    | Token::Zero
                    | Token::True
                    | Token::False
                    | Token::Underscore
                    | Token::LParen
            )
        )
    }

    fn app(&mut self) -> PResult<Expr> {
        let start = self.here();
        let mut head = self.app_head()?;
        loop {
            if self.peek() == Some(&Token::LBrace) {
                self.bump();
                let arg = self.term()?;
                self.expect(Token::RBrace, "`}`")?;
                head = Expr::new(
                    self.span_from(&start),
                    ExprKind::App(Box::new(head), Box::new(arg), Icit::Impl),
                );
            } else if self.at_atom_start() {
                let arg = self.atom()?;
                head = Expr::new(
                    self.span_from(&start),
                    ExprKind::App(Box::new(head), Box::new(arg), Icit::Expl),
                );
            } else {
                return Ok(head);
            }
        }
    }

    fn app_head(&mut self) -> PResult<Expr> {
        let start = self.here();
        let kind = match self.peek() {
            Some(Token::Succ) => {
                self.bump();
                ExprKind::Succ(Box::new(self.atom()?))
            }
            Some(Token::Fst) => {
                self.bump();
                ExprKind::Fst(Box::new(self.atom()?))
            }
            Some(Token::Snd) => {
                self.bump();
                ExprKind::Snd(Box::new(self.atom()?))
            }
            Some(Token::NatElim) => {
                self.bump();
                let [p, z, s, n] = self.four_atoms()?;
                ExprKind::NatElim(p, z, s, n)
            }
            Some(Token::BoolElim) => {
                self.bump();
                let [p, t, f, b] = self.four_atoms()?;
                ExprKind::BoolElim(p, t, f, b)
            }
            _ => return self.atom(),
        };
        Ok(Expr::new(self.span_from(&start), kind))
    }

    fn four_atoms(&mut self) -> PResult<[Box<Expr>; 4]> {
        Ok([
            Box::new(self.atom()?),
            Box::new(self.atom()?),
            Box::new(self.atom()?),
            Box::new(self.atom()?),
        ])
    }

    fn atom(&mut self) -> PResult<Expr> {
        let Some(tok) = self.peek().cloned() else {
            return Err(self.error(&["expression"]));
        };
        let kind = match tok {
            Token::Ident(x) => ExprKind::Var(x),
            Token::Num(n) => ExprKind::NumLit(n),
            Token::Univ => ExprKind::Univ,
            Token::Nat => ExprKind::NatTy,
            Token::Bool => ExprKind::BoolTy,
            Token::Zero => ExprKind::Zero,
            Token::True => ExprKind::True,
            Token::False => ExprKind::False,
            Token::Underscore => ExprKind::Hole,
            Token::LParen => return self.parens(),
            _ => return Err(self.error(&["expression"])),
        };
        let span = self.bump().span.clone();
        Ok(Expr::new(span, kind))
    }

    fn parens(&mut self) -> PResult<Expr> {
        let start = self.expect(Token::LParen, "`(`")?;
        let mut items = vec![self.term()?];
        while self.eat(&Token::Comma) {
            items.push(self.term()?);
        }
        self.expect(Token::RParen, if items.len() == 1 { "`)` or `,`" } else { "`)`" })?;
        let span = self.span_from(&start);
        let mut it = items.into_iter().rev();
        let mut acc = it.next().unwrap();
        for item in it {
            acc = Expr::new(span.clone(), ExprKind::Pair(Box::new(item), Box::new(acc)));
        }
        Ok(acc)
    }
}
