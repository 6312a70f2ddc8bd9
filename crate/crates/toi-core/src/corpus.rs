//! Token stream ingestion and persistence.
//!
//! A corpus is one contiguous list of token ids. Text is tokenized either on
//! Unicode whitespace runs or per character, with ids handed out in order of
//! first appearance. Streams round-trip through a binary id file
//! (`TOITOK01` magic, u32 little-endian count, u32 little-endian ids) and an
//! optional vocabulary sidecar (UTF-8 lines, line `k` is the string for id
//! `k`).

use std::collections::HashMap;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};

pub const TOKEN_FILE_MAGIC: &[u8; 8] = b"TOITOK01";

/// How [`ingest_text`] splits raw text into tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenizeMode {
    /// Split on runs of Unicode whitespace.
    Whitespace,
    /// One token per Unicode scalar value, whitespace included.
    Character,
}

/// Bidirectional token-string <-> token-id map, ids dense from 0.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocab {
    strings: Vec<String>,
    ids: HashMap<String, u32>,
}

impl Vocab {
    /// Id for `token`, inserting it with the next free id if unseen.
    fn intern(&mut self, token: &str) -> u32 {
        if let Some(&id) = self.ids.get(token) {
            return id;
        }
        let id = self.strings.len() as u32;
        self.strings.push(token.to_owned());
        self.ids.insert(token.to_owned(), id);
        id
    }

    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }

    pub fn string_for(&self, id: u32) -> Option<&str> {
        self.strings.get(id as usize).map(String::as_str)
    }

    pub fn id_for(&self, token: &str) -> Option<u32> {
        self.ids.get(token).copied()
    }

    /// Iterate strings in id order.
    pub fn strings(&self) -> impl Iterator<Item = &str> {
        self.strings.iter().map(String::as_str)
    }
}

/// An immutable, contiguous sequence of token ids.
///
/// Construction is single-threaded; a built stream has no interior
/// mutability and may be shared freely across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenStream {
    tokens: Vec<u32>,
    vocab: Option<Vocab>,
}

impl TokenStream {
    /// Wrap a raw id sequence; no vocabulary attached.
    pub fn from_ids(tokens: Vec<u32>) -> Self {
        TokenStream { tokens, vocab: None }
    }

    /// Number of tokens in the stream.
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn tokens(&self) -> &[u32] {
        &self.tokens
    }

    pub fn vocab(&self) -> Option<&Vocab> {
        self.vocab.as_ref()
    }
}

/// Tokenize a UTF-8 text file. Ids are assigned by first appearance, so
/// identical input bytes always produce the identical stream and vocabulary.
pub fn ingest_text(path: impl AsRef<Path>, mode: TokenizeMode) -> Result<TokenStream> {
    let text = fs::read_to_string(path)?;
    Ok(tokenize(&text, mode))
}

/// Tokenize in-memory text; the core of [`ingest_text`].
pub fn tokenize(text: &str, mode: TokenizeMode) -> TokenStream {
    let mut vocab = Vocab::default();
    let mut tokens = Vec::new();
    match mode {
        TokenizeMode::Whitespace => {
            for word in text.split_whitespace() {
                tokens.push(vocab.intern(word));
            }
        }
        TokenizeMode::Character => {
            let mut buf = [0u8; 4];
            for ch in text.chars() {
                tokens.push(vocab.intern(ch.encode_utf8(&mut buf)));
            }
        }
    }
    TokenStream { tokens, vocab: Some(vocab) }
}

/// Read a token-id file: either the `TOITOK01` binary format or plain text
/// with one non-negative integer per line. The result carries no vocabulary.
pub fn ingest_ids(path: impl AsRef<Path>) -> Result<TokenStream> {
    let bytes = fs::read(path)?;
    if bytes.starts_with(TOKEN_FILE_MAGIC) {
        return decode_ids(&bytes);
    }
    parse_id_lines(&bytes)
}

fn parse_id_lines(bytes: &[u8]) -> Result<TokenStream> {
    let text = std::str::from_utf8(bytes).map_err(|_| Error::MalformedId {
        line: 1,
        text: "<non-utf8 data>".to_owned(),
    })?;
    let mut tokens = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let id: u32 = line.parse().map_err(|_| Error::MalformedId {
            line: idx + 1,
            text: line.to_owned(),
        })?;
        tokens.push(id);
    }
    Ok(TokenStream::from_ids(tokens))
}

fn decode_ids(bytes: &[u8]) -> Result<TokenStream> {
    let body = &bytes[TOKEN_FILE_MAGIC.len()..];
    if body.len() < 4 {
        return Err(Error::TruncatedTokenFile { declared: 0, actual: 0 });
    }
    let declared = u32::from_le_bytes(body[..4].try_into().unwrap()) as usize;
    let payload = &body[4..];
    if payload.len() < declared * 4 {
        return Err(Error::TruncatedTokenFile {
            declared,
            actual: payload.len() / 4,
        });
    }
    let tokens = payload[..declared * 4]
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(TokenStream::from_ids(tokens))
}

/// Write the stream's ids in the binary `TOITOK01` format. Byte-exact:
/// writing, re-reading, and writing again reproduces the same file.
pub fn write_ids(stream: &TokenStream, path: impl AsRef<Path>) -> Result<()> {
    let file = fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    w.write_all(TOKEN_FILE_MAGIC)?;
    w.write_all(&(stream.len() as u32).to_le_bytes())?;
    for &id in stream.tokens() {
        w.write_all(&id.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

/// Write the vocabulary sidecar: line `k` holds the string for id `k`.
///
/// Token strings containing a newline (possible in character mode) cannot be
/// represented line-per-id and will not survive a reload of the sidecar; the
/// id stream itself is unaffected.
pub fn write_vocab_sidecar(vocab: &Vocab, path: impl AsRef<Path>) -> Result<()> {
    let file = fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    for s in vocab.strings() {
        w.write_all(s.as_bytes())?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

/// Load a vocabulary sidecar written by [`write_vocab_sidecar`].
pub fn load_vocab_sidecar(path: impl AsRef<Path>) -> Result<Vocab> {
    let text = fs::read_to_string(path)?;
    let mut vocab = Vocab::default();
    for line in text.lines() {
        vocab.intern(line);
    }
    Ok(vocab)
}
