//! The translation pipeline: lingware loading, sentence translation,
//! golden-corpus checking and bilexicon expansion.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::dsl::{parse as parse_dsl, parse_sign_refs, Stmt};
use crate::generator::{generate, realize, Generation};
use crate::lingware::{hierarchy_from_stmts, Lang, LexicalSign, Lexicon, LingwareError, Vocab};
use crate::parser::{parse, skolemize, tokenize, Grammar, TransferRep};
use crate::tfs::TypeHierarchy;
use crate::transfer::{build_tl_bag, cover, lexeme_ref, relevant, BilexEntry, Bilexicon};

pub const DEFAULT_DEPTH: usize = 2;

/// Lexicon and grammar of one language.
#[derive(Clone, Debug)]
pub struct Language {
    pub lexicon: Lexicon,
    pub grammar: Grammar,
}

/// Everything loaded from a lingware directory.
#[derive(Clone, Debug)]
pub struct Lingware {
    pub hierarchy: TypeHierarchy,
    pub vocab: Vocab,
    pub languages: BTreeMap<String, Language>,
    pub bilexicons: Vec<Bilexicon>,
}

impl Lingware {
    /// Loads `hierarchy.lw`, one file per language (those with a `lang`
    /// line) and bilexicons named `left-right.lw`.
    pub fn load(dir: &Path) -> Result<Lingware, LingwareError> {
        let read = |p: &Path| {
            std::fs::read_to_string(p).map_err(|source| LingwareError::Io {
                path: p.display().to_string(),
                source,
            })
        };
        let hierarchy = read(&dir.join("hierarchy.lw"))?;
        let listing = std::fs::read_dir(dir).map_err(|source| LingwareError::Io {
            path: dir.display().to_string(),
            source,
        })?;
        let mut files: Vec<PathBuf> = listing
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "lw") && p.file_name().is_some_and(|n| n != "hierarchy.lw"))
            .collect();
        files.sort();
        let mut sources = Vec::new();
        for f in &files {
            let name = f.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            sources.push((name, read(f)?));
        }
        let named: Vec<(&str, &str)> = sources.iter().map(|(n, s)| (n.as_str(), s.as_str())).collect();
        Lingware::from_sources(&hierarchy, &named)
    }

    /// Builds lingware from `(file stem, text)` pairs.
    pub fn from_sources(hierarchy: &str, files: &[(&str, &str)]) -> Result<Lingware, LingwareError> {
        let h = hierarchy_from_stmts(&parse_dsl(hierarchy).map_err(|e| LingwareError::from(e).in_file("hierarchy.lw"))?)
            .map_err(|e| e.in_file("hierarchy.lw"))?;
        let vocab = Vocab::new(&h)?;
        let mut parsed = Vec::new();
        for (name, text) in files {
            let file = format!("{name}.lw");
            let stmts = parse_dsl(text).map_err(|e| LingwareError::from(e).in_file(&file))?;
            parsed.push((*name, file, stmts));
        }
        let mut languages = BTreeMap::new();
        for (_, file, stmts) in parsed.iter().filter(|(_, _, s)| s.iter().any(|s| matches!(s, Stmt::Lang(_)))) {
            let lexicon = Lexicon::from_stmts(&h, &vocab, stmts).map_err(|e| e.in_file(file))?;
            let grammar = Grammar::from_stmts(&h, stmts).map_err(|e| e.in_file(file))?;
            languages.insert(lexicon.lang().to_string(), Language { lexicon, grammar });
        }
        let mut bilexicons = Vec::new();
        for (name, file, stmts) in &parsed {
            if !stmts.iter().any(|s| matches!(s, Stmt::Bilex(_) | Stmt::Birule(_))) {
                continue;
            }
            let pair = name
                .split_once('-')
                .and_then(|(l, r)| Some((languages.get(l)?, languages.get(r)?)))
                .ok_or_else(|| {
                    LingwareError::invalid(0, "bilexicon file must be named after two loaded languages, left-right")
                        .in_file(file)
                })?;
            bilexicons.push(Bilexicon::from_stmts(&h, &pair.0.lexicon, &pair.1.lexicon, stmts).map_err(|e| e.in_file(file))?);
        }
        Ok(Lingware {
            hierarchy: h,
            vocab,
            languages,
            bilexicons,
        })
    }

    pub fn language(&self, name: &str) -> Option<&Language> {
        self.languages.get(name)
    }

    fn require(&self, name: &str) -> Result<&Language, SessionError> {
        self.language(name)
            .ok_or_else(|| SessionError::UnknownLanguage(name.to_string()))
    }

    /// Skolemized analyses of `text`, or the parser's diagnostics.
    pub fn analyse(&self, lang: &str, text: &str) -> Result<Result<Vec<TransferRep>, Vec<String>>, SessionError> {
        let l = self.require(lang)?;
        let out = parse(&self.hierarchy, &l.grammar, &l.lexicon, &tokenize(text, lang));
        if out.analyses.is_empty() {
            return Ok(Err(out.diagnostics));
        }
        Ok(Ok(out.analyses.iter().map(skolemize).collect()))
    }

    /// Reads a bag of sign references such as `juan1(1) amar1(2,1,3)`.
    pub fn read_bag(&self, lang: &str, src: &str) -> Result<Vec<LexicalSign>, SessionError> {
        let l = self.require(lang)?;
        let refs = parse_sign_refs(src).map_err(LingwareError::from)?;
        refs.iter()
            .map(|r| lexeme_ref(&self.hierarchy, &l.lexicon, r, 0).map_err(SessionError::from))
            .collect()
    }

    /// Generates and realizes every ordering of `bag`.
    pub fn generate_bag(&self, lang: &str, bag: &[LexicalSign], trace: bool) -> Result<(Vec<String>, Generation), SessionError> {
        let l = self.require(lang)?;
        let generation = generate(&self.hierarchy, &l.grammar, bag, trace);
        let mut texts: Vec<String> = Vec::new();
        for seq in &generation.sequences {
            let t = realize(&self.hierarchy, &seq.signs).map_err(|e| SessionError::Realize(e.to_string()))?;
            if !texts.contains(&t) {
                texts.push(t);
            }
        }
        Ok((texts, generation))
    }

    /// The bilexicon relating two languages, in either direction.
    pub fn bilexicon(&self, a: &str, b: &str) -> Option<&Bilexicon> {
        self.bilexicons
            .iter()
            .find(|bl| (bl.left.as_str() == a && bl.right.as_str() == b) || (bl.left.as_str() == b && bl.right.as_str() == a))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputMode {
    #[default]
    Best,
    All,
}

/// Pipeline stages, in increasing severity of failure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Generate,
    Transfer,
    Parse,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Parse => "parse",
            Stage::Transfer => "transfer",
            Stage::Generate => "generate",
        }
    }

    /// Process exit status for a failure at this stage.
    pub fn exit_code(self) -> i32 {
        match self {
            Stage::Generate => 2,
            Stage::Transfer => 3,
            Stage::Parse => 4,
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TraceFlags {
    pub parse: bool,
    pub transfer: bool,
    pub rules: bool,
    pub generate: bool,
}

impl TraceFlags {
    pub fn any(self) -> bool {
        self.parse || self.transfer || self.rules || self.generate
    }

    /// Parses a comma-separated stage list.
    pub fn parse_list(list: &str) -> Result<TraceFlags, String> {
        let mut t = TraceFlags::default();
        for s in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match s {
                "parse" => t.parse = true,
                "transfer" => t.transfer = true,
                "rules" => t.rules = true,
                "generate" => t.generate = true,
                "all" => {
                    t = TraceFlags {
                        parse: true,
                        transfer: true,
                        rules: true,
                        generate: true,
                    }
                }
                other => return Err(format!("unknown trace stage {other}")),
            }
        }
        Ok(t)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SessionConfig {
    pub from: String,
    pub to: String,
    pub lingware: PathBuf,
    pub depth: usize,
    /// Cap on outputs per input; `None` keeps all.
    pub max_results: Option<usize>,
    pub trace: TraceFlags,
    pub mode: OutputMode,
}

impl SessionConfig {
    pub fn new(from: &str, to: &str, lingware: impl Into<PathBuf>) -> SessionConfig {
        SessionConfig {
            from: from.to_string(),
            to: to.to_string(),
            lingware: lingware.into(),
            depth: DEFAULT_DEPTH,
            max_results: None,
            trace: TraceFlags::default(),
            mode: OutputMode::Best,
        }
    }
}

#[derive(Debug, Error)]
pub enum SessionError {
    #[error(transparent)]
    Lingware(#[from] LingwareError),
    #[error("source and target language are both {0}")]
    SameLanguage(String),
    #[error("language {0} is not in the lingware")]
    UnknownLanguage(String),
    #[error("no bilexicon relates {0} and {1}")]
    NoBilexicon(String, String),
    #[error("{0}")]
    Config(String),
    #[error("realization failed: {0}")]
    Realize(String),
    #[error("corpus line {line}: {msg}")]
    Corpus { line: usize, msg: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceLine {
    pub stage: &'static str,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Output {
    pub text: String,
    pub cover: String,
    /// Position in `trace` of the line recording this output's derivation,
    /// when tracing.
    pub trace_ref: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageFailure {
    pub stage: Stage,
    pub diagnostics: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TranslationResult {
    pub input: String,
    pub analyses: usize,
    pub covers: usize,
    pub outputs: Vec<Output>,
    pub failure: Option<StageFailure>,
    pub trace: Vec<TraceLine>,
}

impl TranslationResult {
    pub fn texts(&self) -> Vec<&str> {
        self.outputs.iter().map(|o| o.text.as_str()).collect()
    }
}

/// A loaded pipeline for one language direction.
pub struct Session<'a> {
    lw: &'a Lingware,
    config: SessionConfig,
    from: &'a Language,
    to: &'a Language,
    bilex: &'a Bilexicon,
    entries: Vec<BilexEntry>,
}

impl<'a> Session<'a> {
    pub fn new(lw: &'a Lingware, config: SessionConfig) -> Result<Session<'a>, SessionError> {
        if config.from == config.to {
            return Err(SessionError::SameLanguage(config.from.clone()));
        }
        let from = lw
            .language(&config.from)
            .ok_or_else(|| SessionError::UnknownLanguage(config.from.clone()))?;
        let to = lw
            .language(&config.to)
            .ok_or_else(|| SessionError::UnknownLanguage(config.to.clone()))?;
        let bilex = lw
            .bilexicon(&config.from, &config.to)
            .ok_or_else(|| SessionError::NoBilexicon(config.from.clone(), config.to.clone()))?;
        let all = expand_all(lw, bilex, config.depth);
        let entries = bilex.oriented(&all, &Lang::new(&config.from));
        Ok(Session {
            lw,
            config,
            from,
            to,
            bilex,
            entries,
        })
    }

    pub fn config(&self) -> &SessionConfig {
        &self.config
    }

    /// Static and derived entries of the bilexicon, authored direction.
    pub fn expand(&self) -> Vec<BilexEntry> {
        expand_all(self.lw, self.bilex, self.config.depth)
    }

    /// Analysis, skolemization, transfer, generation and realization.
    /// Outputs follow analysis order, then cover order, then generation
    /// order, without duplicates.
    pub fn translate(&self, text: &str) -> TranslationResult {
        let h = &self.lw.hierarchy;
        let trace = self.config.trace;
        let mut res = TranslationResult {
            input: text.to_string(),
            analyses: 0,
            covers: 0,
            outputs: Vec::new(),
            failure: None,
            trace: Vec::new(),
        };
        let log = |res: &mut TranslationResult, on: bool, stage: &'static str, text: String| -> usize {
            if on {
                res.trace.push(TraceLine { stage, text });
            }
            res.trace.len().saturating_sub(1)
        };
        let tokens = tokenize(text, &self.config.from);
        let parsed = parse(h, &self.from.grammar, &self.from.lexicon, &tokens);
        res.analyses = parsed.analyses.len();
        if parsed.analyses.is_empty() {
            res.failure = Some(StageFailure {
                stage: Stage::Parse,
                diagnostics: parsed.diagnostics,
            });
            return res;
        }
        let mut seen = HashSet::new();
        let mut transfer_diags = Vec::new();
        let mut generate_diags = Vec::new();
        for analysis in &parsed.analyses {
            let rep = skolemize(analysis);
            log(&mut res, trace.parse, "parse", rep.summary());
            let entries = relevant(h, self.entries.clone(), &rep);
            if trace.rules {
                for e in entries.iter().filter(|e| e.is_derived()) {
                    log(&mut res, true, "rules", e.describe());
                }
            }
            let outcome = cover(h, &rep, &entries);
            res.covers += outcome.covers.len();
            transfer_diags.extend(outcome.diagnostic);
            for c in &outcome.covers {
                let summary = c.summary(&entries);
                log(&mut res, trace.transfer, "transfer", format!("cover {summary}"));
                let bag = match build_tl_bag(h, &self.lw.vocab, &rep, &entries, c) {
                    Ok(b) => b,
                    Err(e) => {
                        transfer_diags.push(format!("{summary}: {e}"));
                        continue;
                    }
                };
                let bag_text: Vec<String> = bag.iter().map(|s| s.short()).collect();
                log(&mut res, trace.transfer, "transfer", format!("bag {}", bag_text.join(" ")));
                let generation = generate(h, &self.to.grammar, &bag, trace.generate);
                for t in generation.trace {
                    log(&mut res, true, "generate", t);
                }
                if generation.sequences.is_empty() {
                    generate_diags.push(
                        generation
                            .diagnostic
                            .unwrap_or_else(|| format!("no ordering of {}", bag_text.join(" "))),
                    );
                }
                for seq in &generation.sequences {
                    let surface = match realize(h, &seq.signs) {
                        Ok(s) => s,
                        Err(e) => {
                            generate_diags.push(e.to_string());
                            continue;
                        }
                    };
                    if seen.insert(surface.clone()) {
                        let at = trace.any().then(|| log(&mut res, true, "output", format!("{surface}  <=  {summary}")));
                        res.outputs.push(Output {
                            text: surface,
                            cover: summary.clone(),
                            trace_ref: at,
                        });
                    }
                }
            }
        }
        let limit = match self.config.mode {
            OutputMode::Best => Some(1),
            OutputMode::All => self.config.max_results,
        };
        if let Some(n) = limit {
            res.outputs.truncate(n);
        }
        if res.outputs.is_empty() {
            res.failure = Some(if res.covers == 0 || generate_diags.is_empty() {
                StageFailure {
                    stage: Stage::Transfer,
                    diagnostics: transfer_diags,
                }
            } else {
                StageFailure {
                    stage: Stage::Generate,
                    diagnostics: generate_diags,
                }
            });
        }
        res
    }

    /// Target bags of every cover of every analysis of `text`, in the
    /// order translation visits them.
    pub fn bags(&self, text: &str) -> Vec<Vec<LexicalSign>> {
        let h = &self.lw.hierarchy;
        let tokens = tokenize(text, &self.config.from);
        let parsed = parse(h, &self.from.grammar, &self.from.lexicon, &tokens);
        let mut out = Vec::new();
        for analysis in &parsed.analyses {
            let rep = skolemize(analysis);
            let entries = relevant(h, self.entries.clone(), &rep);
            for c in cover(h, &rep, &entries).covers {
                if let Ok(bag) = build_tl_bag(h, &self.lw.vocab, &rep, &entries, &c) {
                    out.push(bag);
                }
            }
        }
        out
    }

    /// Oriented static and derived entries this session translates with.
    pub fn entries(&self) -> &[BilexEntry] {
        &self.entries
    }

    /// Checks a tab-separated corpus of `source`, `expected`, `first|member`
    /// lines. Blank lines and `#` comments are skipped.
    pub fn check_corpus(&self, corpus: &str) -> Result<CorpusReport, SessionError> {
        let cases = parse_corpus(corpus)?;
        let mut lines = Vec::new();
        for case in cases {
            let res = self.translate_all(&case.source);
            let texts = res.texts();
            let pass = match case.mode {
                Expectation::First => texts.first() == Some(&case.expected.as_str()),
                Expectation::Member => texts.contains(&case.expected.as_str()),
            };
            lines.push(CorpusLine {
                line: case.line,
                source: case.source,
                expected: case.expected,
                mode: case.mode,
                pass,
                outputs: texts.iter().map(|s| s.to_string()).collect(),
                failure: res.failure,
            });
        }
        let passed = lines.iter().filter(|l| l.pass).count();
        Ok(CorpusReport {
            failed: lines.len() - passed,
            passed,
            lines,
        })
    }

    fn translate_all(&self, text: &str) -> TranslationResult {
        if self.config.mode == OutputMode::All && self.config.max_results.is_none() {
            return self.translate(text);
        }
        let cfg = SessionConfig {
            mode: OutputMode::All,
            max_results: None,
            ..self.config.clone()
        };
        Session {
            config: cfg,
            entries: self.entries.clone(),
            ..*self
        }
        .translate(text)
    }
}

fn expand_all(lw: &Lingware, bilex: &Bilexicon, depth: usize) -> Vec<BilexEntry> {
    let left = &lw.languages[bilex.left.as_str()].lexicon;
    let right = &lw.languages[bilex.right.as_str()].lexicon;
    bilex.expand(&lw.hierarchy, &lw.vocab, left, right, depth)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Expectation {
    First,
    Member,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusCase {
    pub line: usize,
    pub source: String,
    pub expected: String,
    pub mode: Expectation,
}

pub fn parse_corpus(text: &str) -> Result<Vec<CorpusCase>, SessionError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = raw.split('\t').map(str::trim).collect();
        let bad = |msg: &str| SessionError::Corpus {
            line,
            msg: msg.to_string(),
        };
        let [source, expected, mode] = fields[..] else {
            return Err(bad("expected source, target and mode separated by tabs"));
        };
        let mode = match mode {
            "first" => Expectation::First,
            "member" => Expectation::Member,
            other => return Err(bad(&format!("unknown mode {other}, use first or member"))),
        };
        if source.is_empty() || expected.is_empty() {
            return Err(bad("empty source or target"));
        }
        out.push(CorpusCase {
            line,
            source: source.to_string(),
            expected: expected.to_string(),
            mode,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusLine {
    pub line: usize,
    pub source: String,
    pub expected: String,
    pub mode: Expectation,
    pub pass: bool,
    pub outputs: Vec<String>,
    pub failure: Option<StageFailure>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CorpusReport {
    pub lines: Vec<CorpusLine>,
    pub passed: usize,
    pub failed: usize,
}

impl CorpusReport {
    pub fn success(&self) -> bool {
        self.failed == 0
    }
}
