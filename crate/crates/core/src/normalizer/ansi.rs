//! Terminal escape and control-character removal.

use std::iter::Peekable;
use std::str::Chars;

/// Removes ANSI escape sequences (CSI, OSC, DCS-style strings, two-byte
/// escapes) and C0 controls other than LF and TAB.
///
/// Sequences never swallow a newline: an escape interrupted by `\n` ends
/// there and the newline is kept.
pub fn strip_ansi_control(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '\x1b' => skip_escape(&mut chars),
            '\n' | '\t' => out.push(c),
            c if c < ' ' || c == '\x7f' => {}
            c => out.push(c),
        }
    }
    out
}

fn skip_escape(chars: &mut Peekable<Chars<'_>>) {
    match chars.peek().copied() {
        Some('[') => {
            chars.next();
            // parameter and intermediate bytes, then one final byte
            while chars.next_if(|c| ('\x20'..='\x3f').contains(c)).is_some() {}
            chars.next_if(|c| ('\x40'..='\x7e').contains(c));
        }
        Some(']' | 'P' | 'X' | '^' | '_') => {
            chars.next();
            while let Some(c) = chars.peek().copied() {
                match c {
                    '\n' => break,
                    '\x07' => {
                        chars.next();
                        break;
                    }
                    '\x1b' => {
                        chars.next();
                        chars.next_if_eq(&'\\');
                        break;
                    }
                    _ => {
                        chars.next();
                    }
                }
            }
        }
        Some(c) if ('\x20'..='\x2f').contains(&c) => {
            while chars.next_if(|c| ('\x20'..='\x2f').contains(c)).is_some() {}
            chars.next_if(|c| ('\x30'..='\x7e').contains(c));
        }
        Some(c) if ('\x30'..='\x7e').contains(&c) => {
            chars.next();
        }
        _ => {}
    }
}
