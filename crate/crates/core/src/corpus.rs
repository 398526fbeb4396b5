//! Labeled corpus ingestion.
//!
//! A corpus is laid out as `root/<language>/<files...>`. The directory name is
//! the label and the file extension must agree with it; files placed directly
//! under `root` are labeled from their extension alone.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::Read;
use std::path::{Path, PathBuf};

use log::warn;
use walkdir::WalkDir;

use crate::error::{Error, Result};
use crate::sample::SourceSample;

/// Bytes read from any one corpus file; the rest is dropped.
pub const MAX_FILE_BYTES: usize = 1 << 20;

const DEFAULT_EXTENSIONS: &[(&str, &str)] = &[
    (".as", "Actionscript"),
    (".ada", "Ada"),
    (".adb", "Ada"),
    (".ads", "Ada"),
    (".b", "Brainfuck"),
    (".bf", "Brainfuck"),
    (".c", "C"),
    (".h", "C"),
    (".cs", "C#"),
    (".c++", "C++"),
    (".cc", "C++"),
    (".cpp", "C++"),
    (".cxx", "C++"),
    (".hh", "C++"),
    (".hpp", "C++"),
    (".hxx", "C++"),
    (".cl", "Common Lisp"),
    (".lisp", "Common Lisp"),
    (".lsp", "Common Lisp"),
    (".css", "CSS"),
    (".erl", "Erlang"),
    (".hrl", "Erlang"),
    (".hs", "Haskell"),
    (".lhs", "Haskell"),
    (".htm", "HTML"),
    (".html", "HTML"),
    (".java", "Java"),
    (".cjs", "Javascript"),
    (".js", "Javascript"),
    (".mjs", "Javascript"),
    (".lua", "Lua"),
    (".m", "Matlab"),
    (".mm", "Objective C"),
    (".pl", "Perl"),
    (".pm", "Perl"),
    (".php", "PHP"),
    (".phtml", "PHP"),
    (".py", "Python"),
    (".pyw", "Python"),
    (".rb", "Ruby"),
    (".scala", "Scala"),
    (".scm", "Scheme"),
    (".sld", "Scheme"),
    (".ss", "Scheme"),
    (".st", "Smalltalk"),
    (".cls", "Latex"),
    (".sty", "Latex"),
    (".tex", "Latex"),
    (".xml", "XML"),
    (".xsd", "XML"),
    (".xsl", "XML"),
    (".xslt", "XML"),
    // Not among the original 25, but common enough to be worth shipping.
    (".rs", "Rust"),
    (".bash", "Shell"),
    (".sh", "Shell"),
];

/// Directory-name spellings that do not survive [`fold_name`] unchanged.
const DIRECTORY_ALIASES: &[(&str, &str)] = &[
    ("cpp", "C++"),
    ("cplusplus", "C++"),
    ("csharp", "C#"),
    ("js", "Javascript"),
    ("lisp", "Common Lisp"),
    ("objc", "Objective C"),
    ("tex", "Latex"),
    ("bash", "Shell"),
    ("sh", "Shell"),
];

/// Lowercase file extension (with its leading dot) to language name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionMap {
    entries: BTreeMap<String, String>,
}

impl Default for ExtensionMap {
    fn default() -> Self {
        ExtensionMap {
            entries: DEFAULT_EXTENSIONS
                .iter()
                .map(|&(ext, lang)| (ext.to_owned(), lang.to_owned()))
                .collect(),
        }
    }
}

impl ExtensionMap {
    pub fn empty() -> Self {
        ExtensionMap {
            entries: BTreeMap::new(),
        }
    }

    /// Adds or replaces one mapping. The extension may be given with or
    /// without its dot; it is stored lowercased.
    pub fn insert(&mut self, extension: &str, language: &str) {
        let ext = extension.trim().to_lowercase();
        let ext = if ext.starts_with('.') {
            ext
        } else {
            format!(".{ext}")
        };
        self.entries.insert(ext, language.trim().to_owned());
    }

    /// Applies `extension=Language` lines on top of this map. Blank lines and
    /// `#` comments are ignored.
    pub fn apply_overrides(&mut self, text: &str) -> Result<()> {
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |reason: &str| Error::ExtensionMap {
                line: idx + 1,
                reason: reason.to_owned(),
            };
            let (ext, lang) = line
                .split_once('=')
                .ok_or_else(|| err("expected extension=Language"))?;
            let ext = ext.trim();
            if ext.is_empty() || ext == "." || ext.chars().any(char::is_whitespace) {
                return Err(err("bad extension"));
            }
            if lang.trim().is_empty() {
                return Err(err("missing language name"));
            }
            self.insert(ext, lang);
        }
        Ok(())
    }

    pub fn load_overrides(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
        self.apply_overrides(&text)
    }

    pub fn get(&self, extension: &str) -> Option<&str> {
        self.entries
            .get(&extension.to_lowercase())
            .map(String::as_str)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(e, l)| (e.as_str(), l.as_str()))
    }

    pub fn languages(&self) -> BTreeSet<&str> {
        self.entries.values().map(String::as_str).collect()
    }

    /// Resolves a corpus directory name ("python", "C++", "cpp") to a language
    /// known to this map.
    pub fn language_for_directory(&self, dir: &str) -> Option<&str> {
        let folded = fold_name(dir);
        if let Some(lang) = self
            .languages()
            .into_iter()
            .find(|l| fold_name(l) == folded)
        {
            return Some(lang);
        }
        let alias = DIRECTORY_ALIASES.iter().find(|(a, _)| *a == folded)?.1;
        self.languages().into_iter().find(|l| *l == alias)
    }
}

fn fold_name(name: &str) -> String {
    name.chars()
        .filter(|c| !matches!(c, ' ' | '-' | '_'))
        .flat_map(char::to_lowercase)
        .collect()
}

/// Language for `path` judged only by its (case-folded) final extension.
pub fn lookup_extension<'m>(path: &Path, map: &'m ExtensionMap) -> Option<&'m str> {
    let ext = path.extension()?.to_str()?;
    map.get(&format!(".{ext}"))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SkipCounts {
    /// Extension missing or not in the map.
    pub unmapped: usize,
    /// Extension maps to a language other than the enclosing directory's.
    pub label_mismatch: usize,
    pub invalid_utf8: usize,
    pub empty: usize,
    pub unreadable: usize,
}

impl SkipCounts {
    pub fn total(&self) -> usize {
        self.unmapped + self.label_mismatch + self.invalid_utf8 + self.empty + self.unreadable
    }

    /// Skips that deserve a warning (as opposed to files that simply are not
    /// source code of a known language).
    pub fn warnings(&self) -> usize {
        self.invalid_utf8 + self.empty + self.unreadable
    }
}

/// Result of walking a corpus directory.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub samples: Vec<SourceSample>,
    pub skipped: SkipCounts,
    pub files_seen: usize,
}

impl Corpus {
    /// Number of samples per label, in label order.
    pub fn label_counts(&self) -> BTreeMap<&str, usize> {
        let mut counts = BTreeMap::new();
        for sample in &self.samples {
            if let Some(label) = sample.label() {
                *counts.entry(label).or_insert(0) += 1;
            }
        }
        counts
    }
}

/// Walks `root` and yields one labeled sample per verified source file, in
/// lexicographic path order.
pub fn walk_corpus(root: &Path, map: &ExtensionMap) -> Result<Corpus> {
    std::fs::read_dir(root).map_err(|source| Error::CorpusRoot {
        path: root.to_owned(),
        source,
    })?;

    let mut files: Vec<PathBuf> = Vec::new();
    for entry in WalkDir::new(root).min_depth(1) {
        let entry = entry.map_err(|e| {
            let path = e.path().unwrap_or(root).to_owned();
            Error::Io {
                path,
                source: e.into(),
            }
        })?;
        if entry.file_type().is_file() {
            files.push(entry.into_path());
        }
    }
    files.sort();

    let mut corpus = Corpus {
        files_seen: files.len(),
        ..Corpus::default()
    };
    for path in files {
        let rel = path.strip_prefix(root).unwrap_or(&path);
        let Some(language) = lookup_extension(&path, map) else {
            corpus.skipped.unmapped += 1;
            continue;
        };
        let mut components = rel.components();
        let top = components.next();
        let nested = components.next().is_some();
        if nested {
            let dir = top.and_then(|c| c.as_os_str().to_str()).unwrap_or_default();
            if map.language_for_directory(dir) != Some(language) {
                corpus.skipped.label_mismatch += 1;
                continue;
            }
        }
        match read_truncated(&path) {
            Ok(text) if text.trim().is_empty() => {
                warn!("skipping empty file {}", path.display());
                corpus.skipped.empty += 1;
            }
            Ok(text) => corpus.samples.push(SourceSample::new(
                path.display().to_string(),
                Some(language.to_owned()),
                text,
            )),
            Err(ReadError::Utf8) => {
                warn!("skipping non-UTF-8 file {}", path.display());
                corpus.skipped.invalid_utf8 += 1;
            }
            Err(ReadError::Io(e)) => {
                warn!("skipping unreadable file {}: {e}", path.display());
                corpus.skipped.unreadable += 1;
            }
        }
    }
    Ok(corpus)
}

enum ReadError {
    Io(std::io::Error),
    Utf8,
}

/// Reads at most [`MAX_FILE_BYTES`]; a multi-byte character cut by the limit
/// is dropped rather than treated as invalid UTF-8.
fn read_truncated(path: &Path) -> std::result::Result<String, ReadError> {
    let mut bytes = Vec::new();
    File::open(path)
        .and_then(|f| f.take(MAX_FILE_BYTES as u64).read_to_end(&mut bytes))
        .map_err(ReadError::Io)?;
    match String::from_utf8(bytes) {
        Ok(s) => Ok(s),
        Err(e) => {
            let err = e.utf8_error();
            let bytes = e.into_bytes();
            if err.error_len().is_none() && bytes.len() == MAX_FILE_BYTES {
                let valid = err.valid_up_to();
                Ok(String::from_utf8(bytes[..valid].to_vec()).map_err(|_| ReadError::Utf8)?)
            } else {
                Err(ReadError::Utf8)
            }
        }
    }
}
