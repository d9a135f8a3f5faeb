use std::fmt;
use std::rc::Rc;

use thiserror::Error;

use crate::span::SourceSpan;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Token {
    Ident(Rc<str>),
    Num(u64),
    // keywords
    Let,
    In,
    Univ,
    Nat,
    Bool,
    Zero,
    Succ,
    NatElim,
    True,
    False,
    BoolElim,
    Fst,
    Snd,
    Main,
    // punctuation
    Backslash,
    Dot,
    Colon,
    ColonZero,
    Arrow,
    Star,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Equals,
    Underscore,
}

impl Token {
    fn keyword(word: &str) -> Option<Token> {
        Some(match word {
            "let" => Token::Let,
            "in" => Token::In,
            "U" => Token::Univ,
            "Nat" => Token::Nat,
            "Bool" => Token::Bool,
            "zero" => Token::Zero,
            "succ" => Token::Succ,
            "natElim" => Token::NatElim,
            "true" => Token::True,
            "false" => Token::False,
            "boolElim" => Token::BoolElim,
            "fst" => Token::Fst,
            "snd" => Token::Snd,
            "main" => Token::Main,
            "_" => Token::Underscore,
            _ => return None,
        })
    }

    pub fn is_keyword(word: &str) -> bool {
        Token::keyword(word).is_some()
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Token::Ident(name) => return write!(f, "{name}"),
            Token::Num(n) => return write!(f, "{n}"),
            Token::Let => "let",
            Token::In => "in",
            Token::Univ => "U",
            Token::Nat => "Nat",
            Token::Bool => "Bool",
            Token::Zero => "zero",
            Token::Succ => "succ",
            Token::NatElim => "natElim",
            Token::True => "true",
            Token::False => "false",
            Token::BoolElim => "boolElim",
            Token::Fst => "fst",
            Token::Snd => "snd",
            Token::Main => "main",
            Token::Backslash => "\\",
            Token::Dot => ".",
            Token::Colon => ":",
            Token::ColonZero => ":0",
            Token::Arrow => "->",
            Token::Star => "*",
            Token::LParen => "(",
            Token::RParen => ")",
            Token::LBrace => "{",
            Token::RBrace => "}",
            Token::Comma => ",",
            Token::Semi => ";",
            Token::Equals => "=",
            Token::Underscore => "_",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpannedToken {
    pub token: Token,
    pub span: SourceSpan,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("unexpected character `{ch}`")]
pub struct LexError {
    pub ch: char,
    pub span: SourceSpan,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: u32,
    col: u32,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let ch = self.chars.next()?;
        if ch == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(ch)
    }

    fn pos(&self) -> (u32, u32) {
        (self.line, self.col)
    }
}

fn is_ident_start(ch: char) -> bool {
    ch.is_ascii_alphabetic() || ch == '_'
}

fn is_ident_continue(ch: char) -> bool {
    ch.is_ascii_alphanumeric() || ch == '_' || ch == '\''
}

/// Splits `source` into tokens. `--` starts a comment running to the end of the line.
pub fn tokenize(file: &str, source: &str) -> Result<Vec<SpannedToken>, LexError> {
    let file: Rc<str> = Rc::from(file);
    let mut cur = Cursor {
        chars: source.chars().peekable(),
        line: 1,
        col: 1,
    };
    let mut tokens = Vec::new();

    while let Some(ch) = cur.peek() {
        let start = cur.pos();
        // end position is inclusive, so track the position of the last char consumed
        let mut last = start;
        let token = match ch {
            c if c.is_whitespace() => {
                cur.bump();
                continue;
            }
            '-' => {
                cur.bump();
                match cur.peek() {
                    Some('-') => {
                        while let Some(c) = cur.peek() {
                            if c == '\n' {
                                break;
                            }
                            cur.bump();
                        }
                        continue;
                    }
                    Some('>') => {
                        last = cur.pos();
                        cur.bump();
                        Token::Arrow
                    }
                    _ => {
                        return Err(LexError {
                            ch: '-',
                            span: SourceSpan::new(file, start, start),
                        })
                    }
                }
            }
            ':' => {
                cur.bump();
                if cur.peek() == Some('0') {
                    last = cur.pos();
                    cur.bump();
                    Token::ColonZero
                } else {
                    Token::Colon
                }
            }
            '\\' => single(&mut cur, Token::Backslash),
            '.' => single(&mut cur, Token::Dot),
            '*' => single(&mut cur, Token::Star),
            '(' => single(&mut cur, Token::LParen),
            ')' => single(&mut cur, Token::RParen),
            '{' => single(&mut cur, Token::LBrace),
            '}' => single(&mut cur, Token::RBrace),
            ',' => single(&mut cur, Token::Comma),
            ';' => single(&mut cur, Token::Semi),
            '=' => single(&mut cur, Token::Equals),
            c if c.is_ascii_digit() => {
                let mut digits = String::new();
                while let Some(c) = cur.peek().filter(char::is_ascii_digit) {
                    last = cur.pos();
                    digits.push(c);
                    cur.bump();
                }
                match digits.parse() {
                    Ok(n) => Token::Num(n),
                    Err(_) => {
                        return Err(LexError {
                            ch: c,
                            span: SourceSpan::new(file, start, last),
                        })
                    }
                }
            }
            c if is_ident_start(c) => {
                let mut word = String::new();
                while let Some(c) = cur.peek().filter(|&c| is_ident_continue(c)) {
                    last = cur.pos();
                    word.push(c);
                    cur.bump();
                }
                Token::keyword(&word).unwrap_or_else(|| Token::Ident(Rc::from(word)))
            }
            other => {
                return Err(LexError {
                    ch: other,
                    span: SourceSpan::new(file, start, start),
                })
            }
        };
        tokens.push(SpannedToken {
            token,
            span: SourceSpan::new(file.clone(), start, last),
        });
    }
    Ok(tokens)
}

fn single(cur: &mut Cursor<'_>, token: Token) -> Token {
    cur.bump();
    token
}
