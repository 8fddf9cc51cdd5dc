//! Recursive-descent parser for the concrete formula syntax.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! formula  := quant | group | unary | atom
//! quant    := ("?" | "!") "[" Var ("," Var)* "]" ":" formula
//! unary    := "~" formula
//! group    := "(" formula (("&" | "|") formula)* ")"
//!           | "(" formula "=>" formula ")"
//! atom     := ident "(" term ("," term)* ")"
//! ```
//!
//! A parenthesized single formula is plain grouping; `&`/`|` chains become
//! flat `And`/`Or` lists (mixing the two in one group is rejected).
//! Uppercase-initial identifiers are variables, lowercase-initial ones are
//! constants; predicate identifiers are lowercase-normalized.

use super::{FolError, Formula, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Question,
    Bang,
    LBracket,
    RBracket,
    Colon,
    LParen,
    RParen,
    Comma,
    Tilde,
    Amp,
    Pipe,
    Arrow,
    Ident(String),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Question => "'?'".into(),
            Tok::Bang => "'!'".into(),
            Tok::LBracket => "'['".into(),
            Tok::RBracket => "']'".into(),
            Tok::Colon => "':'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::Tilde => "'~'".into(),
            Tok::Amp => "'&'".into(),
            Tok::Pipe => "'|'".into(),
            Tok::Arrow => "'=>'".into(),
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, FolError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut column = 1;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, column);
        let bump = |c: char, line: &mut usize, column: &mut usize| {
            if c == '\n' {
                *line += 1;
                *column = 1;
            } else {
                *column += 1;
            }
        };
        match c {
            c if c.is_whitespace() => {
                chars.next();
                bump(c, &mut line, &mut column);
            }
            '?' | '!' | '[' | ']' | ':' | '(' | ')' | ',' | '~' | '&' | '|' => {
                chars.next();
                bump(c, &mut line, &mut column);
                let tok = match c {
                    '?' => Tok::Question,
                    '!' => Tok::Bang,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    ':' => Tok::Colon,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    '~' => Tok::Tilde,
                    '&' => Tok::Amp,
                    _ => Tok::Pipe,
                };
                out.push(Spanned {
                    tok,
                    line: tl,
                    column: tc,
                });
            }
            '=' => {
                chars.next();
                bump('=', &mut line, &mut column);
                match chars.peek() {
                    Some('>') => {
                        chars.next();
                        bump('>', &mut line, &mut column);
                        out.push(Spanned {
                            tok: Tok::Arrow,
                            line: tl,
                            column: tc,
                        });
                    }
                    other => {
                        return Err(FolError::Syntax {
                            line,
                            column,
                            expected: "'>' to complete '=>'".into(),
                            found: other
                                .map(|c| format!("'{c}'"))
                                .unwrap_or_else(|| "end of input".into()),
                        })
                    }
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut ident = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        ident.push(c);
                        chars.next();
                        bump(c, &mut line, &mut column);
                    } else {
                        break;
                    }
                }
                out.push(Spanned {
                    tok: Tok::Ident(ident),
                    line: tl,
                    column: tc,
                });
            }
            other => {
                return Err(FolError::Syntax {
                    line: tl,
                    column: tc,
                    expected: "one of '?', '!', '~', '(', or an identifier".into(),
                    found: format!("'{other}'"),
                })
            }
        }
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> FolError {
        let at = self.peek();
        FolError::Syntax {
            line: at.line,
            column: at.column,
            expected: expected.into(),
            found: at.tok.describe(),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<Spanned, FolError> {
        if self.peek().tok == tok {
            Ok(self.next())
        } else {
            Err(self.error(expected))
        }
    }

    fn formula(&mut self) -> Result<Formula, FolError> {
        match self.peek().tok.clone() {
            Tok::Question => {
                self.next();
                let (vars, body) = self.quantifier_tail()?;
                Ok(Formula::Exists(vars, Box::new(body)))
            }
            Tok::Bang => {
                self.next();
                let (vars, body) = self.quantifier_tail()?;
                Ok(Formula::Forall(vars, Box::new(body)))
            }
            Tok::Tilde => {
                self.next();
                let body = self.formula()?;
                Ok(Formula::Not(Box::new(body)))
            }
            Tok::LParen => self.group(),
            Tok::Ident(_) => self.atom(),
            _ => Err(self.error("a formula ('?', '!', '~', '(' or an identifier)")),
        }
    }

    fn quantifier_tail(&mut self) -> Result<(Vec<String>, Formula), FolError> {
        self.expect(Tok::LBracket, "'[' after quantifier")?;
        let mut vars = Vec::new();
        loop {
            let at = self.peek().clone();
            match at.tok {
                Tok::Ident(name) => {
                    if !name.starts_with(|c: char| c.is_ascii_uppercase()) {
                        return Err(FolError::Syntax {
                            line: at.line,
                            column: at.column,
                            expected: "an uppercase-initial variable name".into(),
                            found: format!("identifier '{name}'"),
                        });
                    }
                    self.next();
                    vars.push(name);
                }
                _ => return Err(self.error("a variable name")),
            }
            match self.peek().tok {
                Tok::Comma => {
                    self.next();
                }
                Tok::RBracket => {
                    self.next();
                    break;
                }
                _ => return Err(self.error("',' or ']' in the variable list")),
            }
        }
        self.expect(Tok::Colon, "':' after the variable list")?;
        let body = self.formula()?;
        Ok((vars, body))
    }

    fn group(&mut self) -> Result<Formula, FolError> {
        self.expect(Tok::LParen, "'('")?;
        let first = self.formula()?;
        match self.peek().tok {
            Tok::RParen => {
                self.next();
                Ok(first)
            }
            Tok::Arrow => {
                self.next();
                let consequent = self.formula()?;
                self.expect(Tok::RParen, "')' after the implication")?;
                Ok(Formula::Implies(Box::new(first), Box::new(consequent)))
            }
            Tok::Amp | Tok::Pipe => {
                let op = self.peek().tok.clone();
                let mut items = vec![first];
                while self.peek().tok == op {
                    self.next();
                    items.push(self.formula()?);
                }
                match self.peek().tok {
                    Tok::RParen => {
                        self.next();
                    }
                    Tok::Amp | Tok::Pipe => {
                        return Err(self.error(
                            "a single connective per group (nest parentheses to mix '&' and '|')",
                        ))
                    }
                    _ => return Err(self.error("')' closing the group")),
                }
                Ok(match op {
                    Tok::Amp => Formula::And(items),
                    _ => Formula::Or(items),
                })
            }
            _ => Err(self.error("')'; '&', '|' or '=>'")),
        }
    }

    fn atom(&mut self) -> Result<Formula, FolError> {
        let at = self.next();
        let Tok::Ident(name) = at.tok else {
            return Err(self.error("a predicate identifier"));
        };
        self.expect(Tok::LParen, "'(' after the predicate")?;
        let mut args = Vec::new();
        loop {
            let t = self.next();
            match t.tok {
                Tok::Ident(n) => {
                    if n.starts_with(|c: char| c.is_ascii_uppercase()) {
                        args.push(Term::Variable(n));
                    } else {
                        args.push(Term::Constant(n));
                    }
                }
                _ => {
                    return Err(FolError::Syntax {
                        line: t.line,
                        column: t.column,
                        expected: "a term (variable or constant)".into(),
                        found: t.tok.describe(),
                    })
                }
            }
            match self.peek().tok {
                Tok::Comma => {
                    self.next();
                }
                Tok::RParen => {
                    self.next();
                    break;
                }
                _ => return Err(self.error("',' or ')' in the argument list")),
            }
        }
        Ok(Formula::atom(name.to_lowercase(), args))
    }
}

fn parse_with(text: &str, allow_open: bool) -> Result<Formula, FolError> {
    let toks = lex(text)?;
    let mut parser = Parser { toks, pos: 0 };
    let formula = parser.formula()?;
    let end = parser.peek().clone();
    if end.tok != Tok::Eof {
        return Err(FolError::Syntax {
            line: end.line,
            column: end.column,
            expected: "end of input".into(),
            found: end.tok.describe(),
        });
    }
    if !allow_open {
        if let Some(name) = formula.free_variables().into_iter().next() {
            return Err(FolError::UnboundVariable {
                name,
                line: 1,
                column: 1,
            });
        }
    }
    Ok(formula)
}

/// Parses a closed formula; unbound variables are an error.
pub fn parse_formula(text: &str) -> Result<Formula, FolError> {
    parse_with(text, false)
}

/// Parses a formula that may contain free variables, for open clause
/// templates such as background-knowledge rules.
pub fn parse_open_formula(text: &str) -> Result<Formula, FolError> {
    parse_with(text, true)
}
