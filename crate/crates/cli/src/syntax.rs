//! Lexer and recursive-descent parser.
//!
//! ```text
//! doc      := stmt*
//! stmt     := manifold | binding | map | command
//! manifold := "manifold" NAME "dim" INT "coords" NAME+ ["field" ("real"|"complex")] ";"
//! binding  := KIND NAME "=" expr ";"
//! map      := "map" NAME ":" NAME "->" NAME "=" "(" expr ("," expr)* ")" ";"
//! command  := VERB NAME* ["at" point+] ["expect" ("true"|"false")] ";"
//! point    := "(" expr ("," expr)* ")"
//! expr     := ["-"] term (("+"|"-") term)*
//! term     := wedge (("*"|"/") wedge)*
//! wedge    := atom ["^" wedge]
//! atom     := INT | "i" | NAME | NAME "(" [expr ("," expr)*] ")" | "@" NAME
//!           | "(" expr ")" | "[" [expr ("," expr)*] "]"
//! ```
//!
//! `#` starts a comment that runs to the end of the line.

use crate::ast::{BindKind, Binding, Command, Document, Expr, Manifold, MapDecl, Sign, Stmt, StmtKind, Verb};
use crate::error::{DslError, Pos, Result};

#[derive(Clone, PartialEq, Debug)]
enum Tok {
    Ident(String),
    Int(String),
    At,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Colon,
    Arrow,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Eq,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(s) => format!("`{s}`"),
            Tok::Eof => "end of input".into(),
            t => format!("`{}`", t.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::At => "@",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Comma => ",",
            Tok::Semi => ";",
            Tok::Colon => ":",
            Tok::Arrow => "->",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Caret => "^",
            Tok::Eq => "=",
            Tok::Ident(_) | Tok::Int(_) | Tok::Eof => "",
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    pos: Pos,
    start: usize,
    end: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        let start = i;
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            Tok::Int(chars[start..i].iter().collect())
        } else {
            i += 1;
            match c {
                '@' => Tok::At,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                ',' => Tok::Comma,
                ';' => Tok::Semi,
                ':' => Tok::Colon,
                '+' => Tok::Plus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '=' => Tok::Eq,
                '-' if chars.get(i) == Some(&'>') => {
                    i += 1;
                    Tok::Arrow
                }
                '-' => Tok::Minus,
                _ => return Err(DslError::Syntax { pos, found: format!("`{c}`"), expected: vec!["a token".into()] }),
            }
        };
        col += i - start;
        out.push(Token { tok, pos, start, end: i });
    }
    out.push(Token { tok: Tok::Eof, pos: Pos { line, col }, start: chars.len(), end: chars.len() });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    at: usize,
}

fn quoted(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| format!("`{s}`")).collect()
}

const ATOM_START: &[&str] = &["integer", "name", "`i`", "`@`", "`(`", "`[`"];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if t.tok != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, expected: Vec<String>) -> Result<T> {
        Err(DslError::Syntax { pos: self.pos(), found: self.peek().describe(), expected })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.fail(quoted(&[t.symbol()]))
        }
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == w)
    }

    fn keyword(&mut self, w: &str) -> Result<()> {
        if self.is_word(w) {
            self.bump();
            Ok(())
        } else {
            self.fail(quoted(&[w]))
        }
    }

    fn name(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.fail(vec!["name".into()]),
        }
    }

    fn document(&mut self) -> Result<Document> {
        let mut stmts = Vec::new();
        while *self.peek() != Tok::Eof {
            stmts.push(self.stmt()?);
        }
        Ok(Document { stmts })
    }

    fn stmt_keywords() -> Vec<String> {
        let mut v = vec!["manifold", "map"];
        v.extend(BindKind::ALL.iter().map(|k| k.keyword()));
        v.extend(Verb::ALL.iter().map(|k| k.keyword()));
        quoted(&v)
    }

    /// A word made of identifiers joined by adjacent hyphens, as in `check-dirac`.
    fn hyphenated(&mut self) -> Option<String> {
        let Tok::Ident(first) = self.peek().clone() else { return None };
        let mut word = first;
        let mut k = self.at + 1;
        while let (Some(m), Some(n)) = (self.toks.get(k), self.toks.get(k + 1)) {
            let (prev_end, Tok::Minus, Tok::Ident(next)) = (self.toks[k - 1].end, &m.tok, &n.tok) else { break };
            if m.start != prev_end || n.start != m.end {
                break;
            }
            word.push('-');
            word.push_str(next);
            k += 2;
        }
        let candidate = (word, k);
        if candidate.1 > self.at + 1 && Verb::from_keyword(&candidate.0).is_none() {
            return None;
        }
        self.at = candidate.1;
        Some(candidate.0)
    }

    fn stmt(&mut self) -> Result<Stmt> {
        let pos = self.pos();
        let start = self.at;
        let Some(word) = self.hyphenated() else { return self.fail(Self::stmt_keywords()) };
        let kind = if word == "manifold" {
            StmtKind::Manifold(self.manifold()?)
        } else if word == "map" {
            StmtKind::Map(self.map_decl()?)
        } else if let Some(kind) = BindKind::from_keyword(&word) {
            let name = self.name()?;
            self.expect(Tok::Eq)?;
            let value = self.expr()?;
            StmtKind::Bind(Binding { kind, name, value })
        } else if let Some(verb) = Verb::from_keyword(&word) {
            StmtKind::Command(self.command(verb)?)
        } else {
            self.at = start;
            return self.fail(Self::stmt_keywords());
        };
        self.expect(Tok::Semi)?;
        Ok(Stmt { pos, kind })
    }

    fn manifold(&mut self) -> Result<Manifold> {
        let name = self.name()?;
        self.keyword("dim")?;
        let dim = match self.peek().clone() {
            Tok::Int(s) => match s.parse::<usize>() {
                Ok(d) => {
                    self.bump();
                    d
                }
                Err(_) => return self.fail(vec!["a small integer".into()]),
            },
            _ => return self.fail(vec!["integer".into()]),
        };
        self.keyword("coords")?;
        let mut coords = vec![self.name()?];
        while matches!(self.peek(), Tok::Ident(s) if s != "field") {
            coords.push(self.name()?);
        }
        let mut complex = false;
        if self.is_word("field") {
            self.bump();
            if self.is_word("complex") {
                complex = true;
            } else if !self.is_word("real") {
                return self.fail(quoted(&["real", "complex"]));
            }
            self.bump();
        } else if *self.peek() != Tok::Semi {
            return self.fail(vec!["name".into(), "`field`".into(), "`;`".into()]);
        }
        Ok(Manifold { name, dim, coords, complex })
    }

    fn map_decl(&mut self) -> Result<MapDecl> {
        let name = self.name()?;
        self.expect(Tok::Colon)?;
        let source = self.name()?;
        self.expect(Tok::Arrow)?;
        let target = self.name()?;
        self.expect(Tok::Eq)?;
        let components = self.tuple()?;
        Ok(MapDecl { name, source, target, components })
    }

    fn tuple(&mut self) -> Result<Vec<Expr>> {
        self.expect(Tok::LParen)?;
        let items = self.expr_list(Tok::RParen)?;
        if items.is_empty() {
            return self.fail(ATOM_START.iter().map(|s| s.to_string()).collect());
        }
        self.expect(Tok::RParen)?;
        Ok(items)
    }

    fn command(&mut self, verb: Verb) -> Result<Command> {
        let mut args = Vec::new();
        while let Tok::Ident(s) = self.peek().clone() {
            if s == "at" || s == "expect" {
                break;
            }
            self.bump();
            args.push(s);
        }
        let mut points = Vec::new();
        if self.is_word("at") {
            self.bump();
            points.push(self.tuple()?);
            while *self.peek() == Tok::LParen {
                points.push(self.tuple()?);
            }
        }
        let mut expect = None;
        if self.is_word("expect") {
            self.bump();
            expect = Some(match self.peek() {
                Tok::Ident(s) if s == "true" => true,
                Tok::Ident(s) if s == "false" => false,
                _ => return self.fail(quoted(&["true", "false"])),
            });
            self.bump();
        } else if *self.peek() != Tok::Semi {
            let mut exp = vec!["name".to_string()];
            exp.extend(quoted(&["at", "expect", ";"]));
            return self.fail(exp);
        }
        Ok(Command { verb, args, points, expect })
    }

    fn expr_list(&mut self, close: Tok) -> Result<Vec<Expr>> {
        let mut items = Vec::new();
        if *self.peek() == close {
            return Ok(items);
        }
        items.push(self.expr()?);
        while self.eat(&Tok::Comma) {
            items.push(self.expr()?);
        }
        if *self.peek() != close {
            return self.fail(quoted(&[",", close.symbol()]));
        }
        Ok(items)
    }

    fn expr(&mut self) -> Result<Expr> {
        let first = if self.eat(&Tok::Minus) { Sign::Minus } else { Sign::Plus };
        let mut terms = vec![(first, self.term()?)];
        loop {
            let sign = match self.peek() {
                Tok::Plus => Sign::Plus,
                Tok::Minus => Sign::Minus,
                _ => break,
            };
            self.bump();
            terms.push((sign, self.term()?));
        }
        Ok(Expr::sum(terms))
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.wedge()?;
        loop {
            if self.eat(&Tok::Star) {
                acc = Expr::Mul(Box::new(acc), Box::new(self.wedge()?));
            } else if self.eat(&Tok::Slash) {
                acc = Expr::Div(Box::new(acc), Box::new(self.wedge()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn wedge(&mut self) -> Result<Expr> {
        let a = self.atom()?;
        if self.eat(&Tok::Caret) {
            return Ok(Expr::Wedge(Box::new(a), Box::new(self.wedge()?)));
        }
        Ok(a)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().clone() {
            Tok::Int(s) => {
                self.bump();
                Ok(Expr::int(&s))
            }
            Tok::Ident(s) => {
                self.bump();
                if self.eat(&Tok::LParen) {
                    let args = self.expr_list(Tok::RParen)?;
                    self.expect(Tok::RParen)?;
                    Ok(Expr::Call(s, args))
                } else if s == "i" {
                    Ok(Expr::Unit)
                } else {
                    Ok(Expr::Name(s))
                }
            }
            Tok::At => {
                self.bump();
                Ok(Expr::Partial(self.name()?))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::LBracket => {
                self.bump();
                let items = self.expr_list(Tok::RBracket)?;
                self.expect(Tok::RBracket)?;
                Ok(Expr::List(items))
            }
            _ => self.fail(ATOM_START.iter().map(|s| s.to_string()).collect()),
        }
    }
}

/// Parses the concrete syntax only; names are not resolved.
pub fn parse_syntax(text: &str) -> Result<Document> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    p.document()
}

/// Parses a single expression.
pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return p.fail(vec!["end of input".into()]);
    }
    Ok(e)
}
