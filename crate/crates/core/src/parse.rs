//! Text syntax for expressions, ground trees and expression files.
//!
//! ```text
//! atom    := symbol | symbol '(' expr (',' expr)* ')' | '0' | '(' expr ')'
//! star    := atom ('*' constant)*
//! product := star ('.' constant star)*
//! expr    := product ('+' product)*
//! ```

use crate::alphabet::{RankedAlphabet, Symbol};
use crate::error::{Error, Result};
use crate::expr::TreeExpr;
use crate::{Expr, Tree};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Name(String),
    Zero,
    LParen,
    RParen,
    Comma,
    Star,
    Dot,
    Plus,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokenize(src: &'a str) -> Result<Vec<(usize, Tok)>> {
        let mut lx = Lexer { src, pos: 0 };
        let mut out = Vec::new();
        loop {
            let (at, tok) = lx.next()?;
            let end = tok == Tok::End;
            out.push((at, tok));
            if end {
                return Ok(out);
            }
        }
    }

    fn next(&mut self) -> Result<(usize, Tok)> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&b) = bytes.get(self.pos) else {
            return Ok((start, Tok::End));
        };
        self.pos += 1;
        let tok = match b {
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'*' => Tok::Star,
            b'.' => Tok::Dot,
            b'+' => Tok::Plus,
            b'0' if !bytes
                .get(self.pos)
                .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_') =>
            {
                Tok::Zero
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while self.pos < bytes.len()
                    && (bytes[self.pos].is_ascii_alphanumeric() || bytes[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                Tok::Name(self.src[start..self.pos].to_string())
            }
            _ => {
                let ch = self.src[start..].chars().next().unwrap_or('?');
                return Err(syntax(start, format!("unexpected character `{ch}`")));
            }
        };
        Ok((start, tok))
    }
}

fn syntax(offset: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        offset,
        message: message.into(),
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self> {
        Ok(Parser {
            toks: Lexer::tokenize(src)?,
            at: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn offset(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(syntax(
                self.offset(),
                format!("expected {what}, found {}", describe(self.peek())),
            ))
        }
    }

    fn name(&mut self, what: &str) -> Result<String> {
        match self.peek().clone() {
            Tok::Name(n) => {
                self.bump();
                Ok(n)
            }
            other => Err(syntax(
                self.offset(),
                format!("expected {what}, found {}", describe(&other)),
            )),
        }
    }

    fn finish(&mut self) -> Result<()> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            Err(syntax(
                self.offset(),
                format!("unexpected {}", describe(self.peek())),
            ))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut e = self.product()?;
        while *self.peek() == Tok::Plus {
            self.bump();
            let r = self.product()?;
            e = TreeExpr::sum(e, r);
        }
        Ok(e)
    }

    fn product(&mut self) -> Result<Expr> {
        let mut e = self.star()?;
        while *self.peek() == Tok::Dot {
            self.bump();
            let c = self.name("product constant")?;
            let r = self.star()?;
            e = TreeExpr::product(e, &c, r);
        }
        Ok(e)
    }

    fn star(&mut self) -> Result<Expr> {
        let mut e = self.atom()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let c = self.name("star constant")?;
            e = TreeExpr::star(e, &c);
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().clone() {
            Tok::Zero => {
                self.bump();
                Ok(TreeExpr::Empty)
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Name(n) => {
                self.bump();
                if *self.peek() == Tok::LParen {
                    self.bump();
                    let mut args = vec![self.expr()?];
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        args.push(self.expr()?);
                    }
                    self.expect(Tok::RParen, "`,` or `)`")?;
                    Ok(TreeExpr::Apply(Symbol::from(n), args))
                } else {
                    Ok(TreeExpr::Const(Symbol::from(n)))
                }
            }
            other => Err(syntax(
                self.offset(),
                format!("expected an expression, found {}", describe(&other)),
            )),
        }
    }

    fn tree(&mut self) -> Result<Tree> {
        let n = self.name("a symbol")?;
        if *self.peek() != Tok::LParen {
            return Ok(Tree::Leaf(Symbol::from(n)));
        }
        self.bump();
        let mut args = vec![self.tree()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            args.push(self.tree()?);
        }
        self.expect(Tok::RParen, "`,` or `)`")?;
        Ok(Tree::Node(Symbol::from(n), args))
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Name(n) => format!("`{n}`"),
        Tok::Zero => "`0`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Star => "`*`".into(),
        Tok::Dot => "`.`".into(),
        Tok::Plus => "`+`".into(),
        Tok::End => "end of input".into(),
    }
}

/// Parses an expression without checking it against an alphabet.
pub fn parse_unchecked(text: &str) -> Result<Expr> {
    let mut p = Parser::new(text)?;
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

/// Parses and validates an expression over `alphabet`.
pub fn parse_expression(text: &str, alphabet: &RankedAlphabet) -> Result<Expr> {
    let e = parse_unchecked(text)?;
    e.validate(alphabet)?;
    Ok(e)
}

/// Parses a ground tree such as `g(b,a)`. Symbols are not checked.
pub fn parse_tree(text: &str) -> Result<Tree> {
    let mut p = Parser::new(text)?;
    let t = p.tree()?;
    p.finish()?;
    Ok(t)
}

/// Parses `name:rank name:rank ...`.
pub fn parse_alphabet(text: &str) -> Result<RankedAlphabet> {
    let mut alphabet = RankedAlphabet::new();
    let mut offset = 0;
    for item in text.split_whitespace() {
        let at = text[offset..].find(item).map_or(offset, |i| offset + i);
        offset = at + item.len();
        let (name, rank) = item
            .split_once(':')
            .ok_or_else(|| syntax(at, format!("expected `name:rank`, found `{item}`")))?;
        if !is_name(name) {
            return Err(syntax(at, format!("invalid symbol name `{name}`")));
        }
        let rank = rank
            .parse::<usize>()
            .map_err(|_| syntax(at + name.len() + 1, format!("invalid rank `{rank}`")))?;
        alphabet.insert(Symbol::new(name), rank)?;
    }
    Ok(alphabet)
}

fn is_name(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Ranks implied by how symbols are used in an expression.
pub fn infer_alphabet(e: &Expr) -> Result<RankedAlphabet> {
    let mut alphabet = RankedAlphabet::new();
    let mut result = Ok(());
    e.walk(&mut |node| {
        if result.is_err() {
            return;
        }
        result = match node {
            TreeExpr::Empty => Ok(()),
            TreeExpr::Const(c) | TreeExpr::Product(_, c, _) | TreeExpr::Star(_, c) => {
                alphabet.insert(c.clone(), 0)
            }
            TreeExpr::Apply(f, cs) => alphabet.insert(f.clone(), cs.len()),
            TreeExpr::Sum(..) => Ok(()),
        };
    });
    result.map(|_| alphabet)
}

/// A parsed expression file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpressionFile {
    pub alphabet: RankedAlphabet,
    pub expr: Expr,
}

/// Reads the two-line expression file format:
///
/// ```text
/// alphabet: f:1 h:1 g:2 a:0 b:0 c:0
/// expr: (f(a)*a .a b + h(b))*b
/// ```
///
/// The `alphabet:` line may be omitted, in which case ranks are inferred
/// from the expression. Blank lines and `#` comments are skipped.
pub fn parse_expression_file(text: &str) -> Result<ExpressionFile> {
    let mut alphabet = None;
    let mut expr_text = None;
    let mut line_start = 0;
    for line in text.split_inclusive('\n') {
        let start = line_start;
        line_start += line.len();
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let lead = line.len() - line.trim_start().len();
        let (key, value) = trimmed
            .split_once(':')
            .ok_or_else(|| syntax(start + lead, "expected `alphabet:` or `expr:` line"))?;
        let value_offset = start + lead + key.len() + 1;
        let shift = |e: Error| match e {
            Error::Syntax { offset, message } => Error::Syntax {
                offset: offset + value_offset,
                message,
            },
            other => other,
        };
        match key.trim() {
            "alphabet" if alphabet.is_none() => {
                alphabet = Some(parse_alphabet(value).map_err(shift)?);
            }
            "expr" if expr_text.is_none() => {
                expr_text = Some(parse_unchecked(value).map_err(shift)?);
            }
            other => {
                return Err(syntax(
                    start + lead,
                    format!("unexpected or repeated key `{other}`"),
                ));
            }
        }
    }
    let expr = expr_text.ok_or_else(|| syntax(text.len(), "missing `expr:` line"))?;
    let alphabet = match alphabet {
        Some(mut a) => {
            // Declared ranks win; symbols used but not declared are errors.
            expr.validate(&a)?;
            a.extend(&infer_alphabet(&expr)?)?;
            a
        }
        None => infer_alphabet(&expr)?,
    };
    Ok(ExpressionFile { alphabet, expr })
}
