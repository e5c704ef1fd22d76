//! Finite words, lazily materialized infinite words, morphisms and their
//! fixed points.
//!
//! Symbols are small integers ([`Symbol`]); an [`Alphabet`] attaches a display
//! glyph to each index so the same machinery serves `{a, b}`, `{0, 1, 2}` and
//! digit alphabets alike.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

/// Index of a letter inside its alphabet.
pub type Symbol = u16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WordError {
    #[error("alphabet must contain at least one letter")]
    EmptyAlphabet,
    #[error("duplicate letter `{0}` in alphabet")]
    DuplicateLetter(String),
    #[error("alphabet has more than {} letters", Symbol::MAX as usize + 1)]
    AlphabetTooLarge,
    #[error("symbol {symbol} is outside an alphabet of size {size}")]
    SymbolOutOfRange { symbol: Symbol, size: usize },
    #[error("cannot tokenize `{0}` over the alphabet")]
    UnknownGlyph(String),
    #[error("words are over different alphabets")]
    AlphabetMismatch,
    #[error("morphism has {found} images but the source alphabet has {expected} letters")]
    ImageCount { expected: usize, found: usize },
    #[error("a fixed point needs an endomorphism")]
    NotEndomorphism,
    #[error("image of the starting letter must be the letter followed by a nonempty word")]
    NotProlongable,
    #[error("iterates of the tail word vanish: the fixed point is finite")]
    MortalTail,
    #[error("composition requires the image alphabet of the first morphism to match")]
    CompositionMismatch,
}

/// Ordered set of distinct glyphs; the position of a glyph is its [`Symbol`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    glyphs: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(glyphs: I) -> Result<Self, WordError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let glyphs: Vec<String> = glyphs.into_iter().map(Into::into).collect();
        if glyphs.is_empty() {
            return Err(WordError::EmptyAlphabet);
        }
        if glyphs.len() > Symbol::MAX as usize + 1 {
            return Err(WordError::AlphabetTooLarge);
        }
        for (i, g) in glyphs.iter().enumerate() {
            if g.is_empty() {
                return Err(WordError::UnknownGlyph(String::new()));
            }
            if glyphs[..i].contains(g) {
                return Err(WordError::DuplicateLetter(g.clone()));
            }
        }
        Ok(Self { glyphs })
    }

    /// One single-character glyph per `char` of `letters`.
    pub fn from_chars(letters: &str) -> Result<Self, WordError> {
        Self::new(letters.chars().map(|c| c.to_string()))
    }

    /// Digit alphabet `{0, …, base-1}`. Bases up to 36 use `0-9a-z`; larger
    /// bases use decimal glyphs.
    pub fn digits(base: u32) -> Self {
        assert!(base >= 1 && base as usize <= Symbol::MAX as usize + 1);
        let glyphs = (0..base)
            .map(|d| {
                if base <= 36 {
                    char::from_digit(d, 36).map(|c| c.to_string()).unwrap_or_default()
                } else {
                    d.to_string()
                }
            })
            .collect();
        Self { glyphs }
    }

    pub fn len(&self) -> usize {
        self.glyphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.glyphs.is_empty()
    }

    pub fn glyph(&self, s: Symbol) -> &str {
        &self.glyphs[s as usize]
    }

    pub fn glyphs(&self) -> &[String] {
        &self.glyphs
    }

    pub fn index_of(&self, glyph: &str) -> Option<Symbol> {
        self.glyphs.iter().position(|g| g == glyph).map(|i| i as Symbol)
    }

    fn single_char(&self) -> bool {
        self.glyphs.iter().all(|g| g.chars().count() == 1)
    }

    pub fn check(&self, symbols: &[Symbol]) -> Result<(), WordError> {
        match symbols.iter().find(|&&s| s as usize >= self.len()) {
            Some(&symbol) => Err(WordError::SymbolOutOfRange { symbol, size: self.len() }),
            None => Ok(()),
        }
    }

    /// Tokenizes `text` by greedy longest glyph match. Commas are accepted as
    /// separators when the alphabet has multi-character glyphs.
    pub fn parse(&self, text: &str) -> Result<Vec<Symbol>, WordError> {
        let mut out = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            if !self.single_char() && rest.starts_with(',') {
                rest = &rest[1..];
                continue;
            }
            let best = self
                .glyphs
                .iter()
                .enumerate()
                .filter(|(_, g)| rest.starts_with(g.as_str()))
                .max_by_key(|(_, g)| g.len());
            match best {
                Some((i, g)) => {
                    out.push(i as Symbol);
                    rest = &rest[g.len()..];
                }
                None => return Err(WordError::UnknownGlyph(rest.to_string())),
            }
        }
        Ok(out)
    }

    /// Renders symbols by concatenating glyphs (comma separated when some
    /// glyph is longer than one character).
    pub fn render(&self, symbols: &[Symbol]) -> String {
        let sep = if self.single_char() { "" } else { "," };
        let mut s = String::new();
        for (i, &sym) in symbols.iter().enumerate() {
            if i > 0 {
                s.push_str(sep);
            }
            s.push_str(self.glyph(sym));
        }
        s
    }
}

/// A finite word over a shared alphabet. The empty word is the identity for
/// [`Word::concat`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word {
    alphabet: Arc<Alphabet>,
    symbols: Vec<Symbol>,
}

impl Word {
    pub fn new(alphabet: Arc<Alphabet>, symbols: Vec<Symbol>) -> Result<Self, WordError> {
        alphabet.check(&symbols)?;
        Ok(Self { alphabet, symbols })
    }

    pub fn empty(alphabet: Arc<Alphabet>) -> Self {
        Self { alphabet, symbols: Vec::new() }
    }

    pub fn parse(alphabet: Arc<Alphabet>, text: &str) -> Result<Self, WordError> {
        let symbols = alphabet.parse(text)?;
        Ok(Self { alphabet, symbols })
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Result<Word, WordError> {
        if !same_alphabet(&self.alphabet, &other.alphabet) {
            return Err(WordError::AlphabetMismatch);
        }
        let mut symbols = Vec::with_capacity(self.len() + other.len());
        symbols.extend_from_slice(&self.symbols);
        symbols.extend_from_slice(&other.symbols);
        Ok(Word { alphabet: self.alphabet.clone(), symbols })
    }

    pub fn reversed(&self) -> Word {
        let mut symbols = self.symbols.clone();
        symbols.reverse();
        Word { alphabet: self.alphabet.clone(), symbols }
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.symbols.starts_with(&self.symbols)
    }

    /// Number of occurrences of each letter.
    pub fn letter_counts(&self) -> Vec<usize> {
        let mut counts = alloc::vec![0; self.alphabet.len()];
        for &s in &self.symbols {
            counts[s as usize] += 1;
        }
        counts
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.alphabet.render(&self.symbols))
    }
}

fn same_alphabet(a: &Arc<Alphabet>, b: &Arc<Alphabet>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Producer behind a [`WordStream`].
///
/// `buf` holds every symbol produced so far; an implementation appends at
/// least up to `target` symbols (it may overshoot). Implementations may read
/// `buf`, which is how self-similar words such as morphism fixed points are
/// generated.
pub trait SymbolSource: Send {
    fn extend(&mut self, buf: &mut Vec<Symbol>, target: usize);
}

struct FnSource<F>(F);

impl<F> SymbolSource for FnSource<F>
where
    F: FnMut(u64) -> Symbol + Send,
{
    fn extend(&mut self, buf: &mut Vec<Symbol>, target: usize) {
        while buf.len() < target {
            let next = (self.0)(buf.len() as u64);
            buf.push(next);
        }
    }
}

/// An infinite word whose prefixes are materialized on demand and memoized.
///
/// `prefix(n)` is always a prefix of `prefix(m)` for `n <= m`, and repeated
/// calls return identical words.
pub struct WordStream {
    alphabet: Arc<Alphabet>,
    buf: Vec<Symbol>,
    source: Box<dyn SymbolSource>,
}

impl fmt::Debug for WordStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WordStream").field("alphabet", &self.alphabet).field("materialized", &self.buf.len()).finish()
    }
}

impl WordStream {
    pub fn new(alphabet: Arc<Alphabet>, source: Box<dyn SymbolSource>) -> Self {
        Self { alphabet, buf: Vec::new(), source }
    }

    /// Stream whose `n`-th symbol (from 0) is `f(n)`.
    pub fn from_fn<F>(alphabet: Arc<Alphabet>, f: F) -> Self
    where
        F: FnMut(u64) -> Symbol + Send + 'static,
    {
        Self::new(alphabet, Box::new(FnSource(f)))
    }

    /// Eventually periodic stream `prefix · period^∞`.
    pub fn ultimately_periodic(
        alphabet: Arc<Alphabet>,
        prefix: Vec<Symbol>,
        period: Vec<Symbol>,
    ) -> Result<Self, WordError> {
        alphabet.check(&prefix)?;
        alphabet.check(&period)?;
        if period.is_empty() {
            return Err(WordError::MortalTail);
        }
        Ok(Self::from_fn(alphabet, move |n| {
            let n = n as usize;
            if n < prefix.len() {
                prefix[n]
            } else {
                period[(n - prefix.len()) % period.len()]
            }
        }))
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    /// Materializes at least `n` symbols and returns exactly the first `n`.
    pub fn symbols(&mut self, n: usize) -> &[Symbol] {
        if self.buf.len() < n {
            self.buf.reserve(n - self.buf.len());
            self.source.extend(&mut self.buf, n);
            debug_assert!(self.buf.len() >= n);
        }
        &self.buf[..n]
    }

    pub fn prefix(&mut self, n: usize) -> Word {
        let symbols = self.symbols(n).to_vec();
        Word { alphabet: self.alphabet.clone(), symbols }
    }

    pub fn get(&mut self, i: usize) -> Symbol {
        self.symbols(i + 1)[i]
    }

    /// Already materialized prefix; never triggers generation.
    pub fn materialized(&self) -> &[Symbol] {
        &self.buf
    }

    /// Stream with the first `k` symbols removed.
    pub fn skip(self, k: usize) -> WordStream {
        let alphabet = self.alphabet.clone();
        WordStream::new(alphabet, Box::new(SkipSource { inner: self, offset: k }))
    }

    /// Letter-to-letter recoding into another alphabet.
    pub fn recode<F>(self, alphabet: Arc<Alphabet>, f: F) -> WordStream
    where
        F: Fn(Symbol) -> Symbol + Send + 'static,
    {
        WordStream::new(alphabet, Box::new(RecodeSource { inner: self, f }))
    }

    /// Applies `phi` block by block: the result is `phi(w_0) phi(w_1) …`.
    pub fn map(self, phi: Morphism) -> Result<WordStream, WordError> {
        if !same_alphabet(&self.alphabet, &phi.src) {
            return Err(WordError::AlphabetMismatch);
        }
        let alphabet = phi.dst.clone();
        Ok(WordStream::new(alphabet, Box::new(ImageSource { inner: self, phi, cursor: 0 })))
    }
}

struct SkipSource {
    inner: WordStream,
    offset: usize,
}

impl SymbolSource for SkipSource {
    fn extend(&mut self, buf: &mut Vec<Symbol>, target: usize) {
        let start = buf.len();
        let src = self.inner.symbols(self.offset + target);
        buf.extend_from_slice(&src[self.offset + start..]);
    }
}

struct RecodeSource<F> {
    inner: WordStream,
    f: F,
}

impl<F> SymbolSource for RecodeSource<F>
where
    F: Fn(Symbol) -> Symbol + Send,
{
    fn extend(&mut self, buf: &mut Vec<Symbol>, target: usize) {
        let start = buf.len();
        let src = self.inner.symbols(target);
        buf.extend(src[start..].iter().map(|&s| (self.f)(s)));
    }
}

struct ImageSource {
    inner: WordStream,
    phi: Morphism,
    cursor: usize,
}

impl SymbolSource for ImageSource {
    fn extend(&mut self, buf: &mut Vec<Symbol>, target: usize) {
        // Erasing images are possible, so read ahead in growing batches.
        let mut batch = 64usize;
        while buf.len() < target {
            let want = self.cursor + batch;
            let src = self.inner.symbols(want);
            for &s in &src[self.cursor..] {
                buf.extend_from_slice(self.phi.image(s));
            }
            self.cursor = want;
            batch = batch.saturating_mul(2).min(1 << 20);
        }
    }
}

/// Generates `w = a u φ(u) φ²(u) …` in place: position `k` of the buffer
/// expands to `φ(w_k)`, appended at the end, because `w = φ(w)`.
struct FixedPointSource {
    phi: Morphism,
    cursor: usize,
}

impl SymbolSource for FixedPointSource {
    fn extend(&mut self, buf: &mut Vec<Symbol>, target: usize) {
        while buf.len() < target {
            // Mortality of the tail was excluded at construction, so the
            // buffer always stays ahead of the cursor.
            assert!(self.cursor < buf.len(), "fixed point generation stalled");
            let s = buf[self.cursor];
            self.cursor += 1;
            if self.cursor == 1 {
                // φ(w_0) is already in the buffer as the seed.
                continue;
            }
            let img = self.phi.image(s);
            buf.extend_from_slice(img);
        }
    }
}

/// A monoid morphism `A* → B*` given by the image of every letter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    src: Arc<Alphabet>,
    dst: Arc<Alphabet>,
    images: Vec<Vec<Symbol>>,
}

impl Morphism {
    pub fn new(src: Arc<Alphabet>, dst: Arc<Alphabet>, images: Vec<Vec<Symbol>>) -> Result<Self, WordError> {
        if images.len() != src.len() {
            return Err(WordError::ImageCount { expected: src.len(), found: images.len() });
        }
        for img in &images {
            dst.check(img)?;
        }
        Ok(Self { src, dst, images })
    }

    /// Builds a morphism from glyph strings, e.g. `[("a", "ab"), ("b", "a")]`.
    pub fn from_strs(src: Arc<Alphabet>, dst: Arc<Alphabet>, rules: &[(&str, &str)]) -> Result<Self, WordError> {
        let mut images = alloc::vec![None; src.len()];
        for (letter, image) in rules {
            let idx = src.index_of(letter).ok_or_else(|| WordError::UnknownGlyph((*letter).to_string()))?;
            images[idx as usize] = Some(dst.parse(image)?);
        }
        let found = images.iter().filter(|i| i.is_some()).count();
        if found != src.len() {
            return Err(WordError::ImageCount { expected: src.len(), found });
        }
        let images = images.into_iter().map(Option::unwrap_or_default).collect();
        Self::new(src, dst, images)
    }

    /// Endomorphism of the alphabet spelled by `letters`.
    pub fn endo(letters: &str, rules: &[(&str, &str)]) -> Result<Self, WordError> {
        let a = Arc::new(Alphabet::from_chars(letters)?);
        Self::from_strs(a.clone(), a, rules)
    }

    pub fn source(&self) -> &Arc<Alphabet> {
        &self.src
    }

    pub fn target(&self) -> &Arc<Alphabet> {
        &self.dst
    }

    pub fn image(&self, s: Symbol) -> &[Symbol] {
        &self.images[s as usize]
    }

    pub fn images(&self) -> &[Vec<Symbol>] {
        &self.images
    }

    /// Common image length when the morphism is uniform.
    pub fn uniform_width(&self) -> Option<usize> {
        let w = self.images[0].len();
        self.images.iter().all(|i| i.len() == w).then_some(w)
    }

    pub fn is_endomorphism(&self) -> bool {
        same_alphabet(&self.src, &self.dst)
    }

    pub fn apply(&self, w: &Word) -> Result<Word, WordError> {
        if !same_alphabet(w.alphabet(), &self.src) {
            return Err(WordError::AlphabetMismatch);
        }
        let mut out = Vec::new();
        self.apply_symbols(w.symbols(), &mut out);
        Ok(Word { alphabet: self.dst.clone(), symbols: out })
    }

    /// Appends `φ(symbols)` to `out`. Symbols must be valid for the source.
    pub fn apply_symbols(&self, symbols: &[Symbol], out: &mut Vec<Symbol>) {
        for &s in symbols {
            out.extend_from_slice(self.image(s));
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Morphism) -> Result<Morphism, WordError> {
        if !same_alphabet(&self.dst, &other.src) {
            return Err(WordError::CompositionMismatch);
        }
        let images = self
            .images
            .iter()
            .map(|img| {
                let mut out = Vec::new();
                other.apply_symbols(img, &mut out);
                out
            })
            .collect();
        Ok(Morphism { src: self.src.clone(), dst: other.dst.clone(), images })
    }

    /// Letters `x` with `φ^k(x) = e` for some `k`.
    pub fn mortal_letters(&self) -> Vec<bool> {
        let mut mortal = alloc::vec![false; self.src.len()];
        loop {
            let mut changed = false;
            for (x, img) in self.images.iter().enumerate() {
                if !mortal[x] && img.iter().all(|&s| mortal[s as usize]) {
                    mortal[x] = true;
                    changed = true;
                }
            }
            if !changed {
                return mortal;
            }
        }
    }

    /// The infinite fixed point `a u φ(u) φ²(u) …` starting with `letter`.
    ///
    /// Requires `φ(a) = a u` with `u` nonempty and `φ^k(u) ≠ e` for every
    /// `k`; the latter is decided exactly through the mortal letters.
    pub fn fixed_point(&self, letter: Symbol) -> Result<WordStream, WordError> {
        if !self.is_endomorphism() {
            return Err(WordError::NotEndomorphism);
        }
        self.src.check(&[letter])?;
        let seed = self.image(letter);
        if seed.len() < 2 || seed[0] != letter {
            return Err(WordError::NotProlongable);
        }
        let mortal = self.mortal_letters();
        if seed[1..].iter().all(|&s| mortal[s as usize]) {
            return Err(WordError::MortalTail);
        }
        let mut stream = WordStream::new(self.src.clone(), Box::new(FixedPointSource { phi: self.clone(), cursor: 0 }));
        stream.buf.extend_from_slice(seed);
        Ok(stream)
    }

    /// Fixed point starting with the letter spelled `glyph`.
    pub fn fixed_point_from(&self, glyph: &str) -> Result<WordStream, WordError> {
        let s = self.src.index_of(glyph).ok_or_else(|| WordError::UnknownGlyph(glyph.to_string()))?;
        self.fixed_point(s)
    }
}

/// The morphic word `φ(u)` where `u` is the fixed point of `sigma` from `letter`.
pub fn morphic_image(sigma: &Morphism, letter: Symbol, phi: &Morphism) -> Result<WordStream, WordError> {
    sigma.fixed_point(letter)?.map(phi.clone())
}

/// Morphisms and words used throughout the crate.
pub mod builtin {
    use super::*;

    /// `a ↦ ab, b ↦ a`.
    pub fn fibonacci_morphism() -> Morphism {
        Morphism::endo("ab", &[("a", "ab"), ("b", "a")]).expect("valid morphism")
    }

    /// `a ↦ ab, b ↦ ba`.
    pub fn thue_morse_morphism() -> Morphism {
        Morphism::endo("ab", &[("a", "ab"), ("b", "ba")]).expect("valid morphism")
    }

    /// `0 ↦ 012, 1 ↦ 12, 2 ↦ 2` (non-recurrent).
    pub fn nesterenko_morphism() -> Morphism {
        Morphism::endo("012", &[("0", "012"), ("1", "12"), ("2", "2")]).expect("valid morphism")
    }

    /// `σ` on `{1,2,3,4}`: `1 ↦ 12, 2 ↦ 13, 3 ↦ 42, 4 ↦ 43`.
    pub fn rudin_shapiro_sigma() -> Morphism {
        Morphism::endo("1234", &[("1", "12"), ("2", "13"), ("3", "42"), ("4", "43")]).expect("valid morphism")
    }

    /// Coding `1 ↦ aa, 2 ↦ ab, 3 ↦ ba, 4 ↦ bb`.
    pub fn rudin_shapiro_phi() -> Morphism {
        let src = rudin_shapiro_sigma().source().clone();
        let dst = Arc::new(Alphabet::from_chars("ab").expect("valid alphabet"));
        Morphism::from_strs(src, dst, &[("1", "aa"), ("2", "ab"), ("3", "ba"), ("4", "bb")]).expect("valid morphism")
    }

    pub fn fibonacci_word() -> WordStream {
        fibonacci_morphism().fixed_point(0).expect("prolongable")
    }

    pub fn thue_morse_word() -> WordStream {
        thue_morse_morphism().fixed_point(0).expect("prolongable")
    }

    /// `u = 0 1 2 1 2² 1 2³ …`.
    pub fn nesterenko_word() -> WordStream {
        nesterenko_morphism().fixed_point(0).expect("prolongable")
    }

    pub fn rudin_shapiro_word() -> WordStream {
        morphic_image(&rudin_shapiro_sigma(), 0, &rudin_shapiro_phi()).expect("prolongable")
    }
}

/// Occurrences of each letter in the first `horizon` symbols. Recurrence of a
/// morphic word can only be observed up to a horizon; this is that census.
pub fn occurrence_counts(w: &mut WordStream, horizon: usize) -> Vec<usize> {
    let mut counts = alloc::vec![0; w.alphabet().len()];
    for &s in w.symbols(horizon) {
        counts[s as usize] += 1;
    }
    counts
}
