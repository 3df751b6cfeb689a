//! A small recursive-descent reader for the directed subset of DOT.
//!
//! Accepted: an optional `strict` keyword, the `digraph` header with an
//! optional name, node statements `<int>;`, edge statements
//! `<int> -> <int> [-> <int> ...];`, attribute lists (skipped), `node`/
//! `edge`/`graph` default-attribute statements and `key = value` graph
//! attributes (both skipped). `//`, `#` and `/* */` comments are allowed.
//! Nodes named only in edges count as declared.

use std::collections::BTreeSet;

use super::{GraphIoError, Position};
use crate::framework::{Argument, Framework};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Id(String),
    Quoted(String),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Semi,
    Comma,
    Equals,
    Arrow,
    UndirectedEdge,
    Colon,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    at: Position,
}

fn lex(text: &str) -> Result<Vec<Token>, GraphIoError> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let (mut i, mut line, mut column) = (0usize, 1usize, 1usize);

    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            i += 1;
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        let at = Position { line, column };
        let next = chars.get(i + 1).copied();
        match c {
            c if c.is_whitespace() => bump!(),
            '/' if next == Some('/') => {
                while i < chars.len() && chars[i] != '\n' {
                    bump!();
                }
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    bump!();
                }
            }
            '/' if next == Some('*') => {
                bump!();
                bump!();
                loop {
                    if i >= chars.len() {
                        return Err(GraphIoError::syntax(at, "unterminated block comment"));
                    }
                    if chars[i] == '*' && chars.get(i + 1) == Some(&'/') {
                        bump!();
                        bump!();
                        break;
                    }
                    bump!();
                }
            }
            '"' => {
                bump!();
                let mut value = String::new();
                loop {
                    match chars.get(i) {
                        None => return Err(GraphIoError::syntax(at, "unterminated string")),
                        Some('"') => {
                            bump!();
                            break;
                        }
                        Some('\\') if chars.get(i + 1).is_some() => {
                            bump!();
                            value.push(chars[i]);
                            bump!();
                        }
                        Some(&ch) => {
                            value.push(ch);
                            bump!();
                        }
                    }
                }
                tokens.push(Token {
                    tok: Tok::Quoted(value),
                    at,
                });
            }
            '-' if next == Some('>') => {
                bump!();
                bump!();
                tokens.push(Token { tok: Tok::Arrow, at });
            }
            '-' if next == Some('-') => {
                bump!();
                bump!();
                tokens.push(Token {
                    tok: Tok::UndirectedEdge,
                    at,
                });
            }
            '{' | '}' | '[' | ']' | ';' | ',' | '=' | ':' => {
                let tok = match c {
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    ';' => Tok::Semi,
                    ',' => Tok::Comma,
                    '=' => Tok::Equals,
                    _ => Tok::Colon,
                };
                bump!();
                tokens.push(Token { tok, at });
            }
            c if c.is_alphanumeric() || c == '_' || c == '.' || c == '-' => {
                let mut value = String::new();
                while i < chars.len() && (chars[i].is_alphanumeric() || matches!(chars[i], '_' | '.' | '-')) {
                    if chars[i] == '-' && matches!(chars.get(i + 1), Some('>') | Some('-')) {
                        break;
                    }
                    value.push(chars[i]);
                    bump!();
                }
                tokens.push(Token {
                    tok: Tok::Id(value),
                    at,
                });
            }
            other => return Err(GraphIoError::syntax(at, format!("unexpected character `{other}`"))),
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: Position,
    arguments: BTreeSet<Argument>,
    attacks: BTreeSet<(Argument, Argument)>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> Position {
        self.tokens.get(self.pos).map(|t| t.at).unwrap_or(self.end)
    }

    fn advance(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), GraphIoError> {
        match self.advance() {
            Some(t) if t.tok == want => Ok(()),
            Some(t) => Err(GraphIoError::syntax(t.at, format!("expected {what}"))),
            None => Err(GraphIoError::syntax(
                self.end,
                format!("expected {what}, found end of input"),
            )),
        }
    }

    fn keyword(&self, word: &str) -> bool {
        matches!(self.peek(), Some(Tok::Id(s)) if s.eq_ignore_ascii_case(word))
    }

    fn graph(&mut self) -> Result<(), GraphIoError> {
        if self.keyword("strict") {
            self.advance();
        }
        if self.keyword("graph") {
            return Err(GraphIoError::syntax(
                self.here(),
                "undirected `graph` is not supported, use `digraph`",
            ));
        }
        if !self.keyword("digraph") {
            return Err(GraphIoError::syntax(self.here(), "expected `digraph`"));
        }
        self.advance();
        if matches!(self.peek(), Some(Tok::Id(_)) | Some(Tok::Quoted(_))) {
            self.advance();
        }
        self.expect(Tok::LBrace, "`{`")?;
        loop {
            match self.peek() {
                Some(Tok::RBrace) => {
                    self.advance();
                    break;
                }
                Some(Tok::Semi) | Some(Tok::Comma) => {
                    self.advance();
                }
                Some(_) => self.statement()?,
                None => return Err(GraphIoError::syntax(self.end, "expected `}`, found end of input")),
            }
        }
        if let Some(t) = self.advance() {
            return Err(GraphIoError::syntax(t.at, "unexpected content after the closing `}`"));
        }
        Ok(())
    }

    fn statement(&mut self) -> Result<(), GraphIoError> {
        if self.keyword("node") || self.keyword("edge") || self.keyword("graph") {
            self.advance();
            return self.attributes();
        }
        if self.keyword("subgraph") {
            return Err(GraphIoError::syntax(self.here(), "subgraphs are not supported"));
        }
        let Some(first) = self.advance() else {
            return Err(GraphIoError::syntax(self.end, "expected a statement"));
        };
        if self.peek() == Some(&Tok::Equals) {
            // graph attribute `key = value`
            self.advance();
            return match self.advance() {
                Some(Token {
                    tok: Tok::Id(_) | Tok::Quoted(_),
                    ..
                }) => Ok(()),
                Some(t) => Err(GraphIoError::syntax(t.at, "expected an attribute value")),
                None => Err(GraphIoError::syntax(self.end, "expected an attribute value")),
            };
        }
        let mut current = node_id(&first)?;
        self.skip_port()?;
        self.arguments.insert(current);
        loop {
            match self.peek() {
                Some(Tok::Arrow) => {
                    self.advance();
                    let Some(t) = self.advance() else {
                        return Err(GraphIoError::syntax(self.end, "expected an edge target"));
                    };
                    let target = node_id(&t)?;
                    self.skip_port()?;
                    self.arguments.insert(target);
                    self.attacks.insert((current, target));
                    current = target;
                }
                Some(Tok::UndirectedEdge) => {
                    return Err(GraphIoError::syntax(self.here(), "undirected edge `--` in a digraph"));
                }
                _ => break,
            }
        }
        self.attributes()
    }

    fn skip_port(&mut self) -> Result<(), GraphIoError> {
        while self.peek() == Some(&Tok::Colon) {
            self.advance();
            match self.advance() {
                Some(Token {
                    tok: Tok::Id(_) | Tok::Quoted(_),
                    ..
                }) => {}
                Some(t) => return Err(GraphIoError::syntax(t.at, "expected a port name")),
                None => return Err(GraphIoError::syntax(self.end, "expected a port name")),
            }
        }
        Ok(())
    }

    fn attributes(&mut self) -> Result<(), GraphIoError> {
        while self.peek() == Some(&Tok::LBracket) {
            let open = self.here();
            self.advance();
            loop {
                match self.advance() {
                    Some(Token { tok: Tok::RBracket, .. }) => break,
                    Some(Token {
                        tok: Tok::Id(_) | Tok::Quoted(_) | Tok::Equals | Tok::Comma | Tok::Semi,
                        ..
                    }) => {}
                    Some(t) => return Err(GraphIoError::syntax(t.at, "unexpected token in attribute list")),
                    None => return Err(GraphIoError::syntax(open, "unterminated attribute list")),
                }
            }
        }
        Ok(())
    }
}

fn node_id(token: &Token) -> Result<Argument, GraphIoError> {
    match &token.tok {
        Tok::Id(s) | Tok::Quoted(s) => parse_identifier(s, Some(token.at)),
        _ => Err(GraphIoError::syntax(token.at, "expected a node identifier")),
    }
}

pub(super) fn parse_identifier(s: &str, at: Option<Position>) -> Result<Argument, GraphIoError> {
    if !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) {
        if let Ok(v) = s.parse::<Argument>() {
            return Ok(v);
        }
    }
    Err(GraphIoError::NonIntegerIdentifier { id: s.to_string(), at })
}

pub(super) fn parse(text: &str) -> Result<Framework, GraphIoError> {
    let tokens = lex(text)?;
    let end = {
        let line = text.lines().count().max(1);
        let column = text.lines().last().map(|l| l.chars().count() + 1).unwrap_or(1);
        Position { line, column }
    };
    let mut parser = Parser {
        tokens,
        pos: 0,
        end,
        arguments: BTreeSet::new(),
        attacks: BTreeSet::new(),
    };
    parser.graph()?;
    Ok(Framework::new(parser.arguments, parser.attacks).expect("edge endpoints are always declared"))
}

pub(super) fn serialize(framework: &Framework) -> String {
    let mut statements: Vec<String> = framework.arguments().iter().map(|a| format!("{a};")).collect();
    statements.extend(framework.attacks().iter().map(|(a, b)| format!("{a} -> {b};")));
    format!("digraph {{{}}}", statements.join(" "))
}
