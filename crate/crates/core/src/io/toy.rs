use std::collections::BTreeSet;

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::conll::{Corpus, Sentence};
use crate::annotate::Gazetteer;
use crate::model::LabelSet;
use crate::rng::substream;

pub const TOY_GAZETTEER: &str = include_str!("../../data/toy_gazetteer.tsv");
pub const TOY_BLOCKLIST: &str = include_str!("../../data/toy_blocklist.txt");

const FIRST_NAMES: &[&str] = &[
    "John", "Mary", "Peter", "Anna", "David", "Maria", "James", "Laura", "Paul", "Sarah", "Thomas",
    "Elena",
];
const LAST_NAMES: &[&str] = &[
    "Smith", "Brown", "Garcia", "Wilson", "Tanaka", "Novak", "Rossi", "Jordan", "Clinton",
    "Becker", "Moreau", "Silva", "Kowalski", "Larsen", "Ivanov", "Haddad", "Okafor", "Fischer",
    "Dubois", "Petrov", "Santos", "Mueller",
];
const ORG_HEADS: &[&str] = &[
    "Reuters",
    "Siemens",
    "Ajax",
    "Fiat",
    "Barclays",
    "Nokia",
    "Boeing",
    "Unilever",
    "Renault",
    "Shell",
    "Juventus",
    "Interpol",
    "Philips",
    "Lufthansa",
];
const ORG_SUFFIXES: &[&str] = &["Group", "Bank", "Corp", "United"];
const LOCATIONS: &[&str] = &[
    "France", "Germany", "Britain", "Bonn", "Paris", "London", "Italy", "Spain", "Japan", "Moscow",
    "Brazil", "Kenya", "Jordan", "Madrid", "Tokyo", "Berlin", "Canada", "Egypt", "Chicago",
    "Sydney", "Lagos", "Oslo", "Vienna", "Poland",
];
const MISC: &[&str] = &[
    "German",
    "French",
    "British",
    "Italian",
    "Japanese",
    "European",
    "Olympic",
    "Dutch",
    "Russian",
    "Brazilian",
    "Christmas",
    "Euro",
];
const DAYS: &[&str] = &[
    "Monday",
    "Tuesday",
    "Wednesday",
    "Thursday",
    "Friday",
    "Saturday",
    "Sunday",
];
const MONTHS: &[&str] = &["January", "March", "June", "October"];
const NUMBERS: &[&str] = &["2", "3", "5", "10", "20", "3.5"];

/// Sentence patterns. Braced slots are filled at generation time; `{ANY}`
/// takes a person, organization or location with equal probability.
const TEMPLATES: &[&str] = &[
    "{PER} said on {DAY} that {ORG} would sign a deal with {ORG} .",
    "{PER} , the {MISC} minister , arrived in {LOC} on {DAY} .",
    "shares of {ORG} rose {NUM} percent in {LOC} .",
    "{ORG} beat {ORG} {NUM} - {NUM} in {LOC} .",
    "the {MISC} team won the {MISC} cup after {PER} scored .",
    "{PER} met {PER} in {LOC} for talks on the {MISC} market .",
    "police in {LOC} said {PER} was arrested on {DAY} .",
    "{ORG} announced a new chief executive , {PER} .",
    "{LOC} and {LOC} signed a deal in {LOC} .",
    "{ANY} told reporters in {LOC} that the talks would continue .",
    "officials from {ORG} visited {LOC} last week .",
    "the {MISC} government said on {DAY} it would talk to {LOC} .",
    "{PER} of {LOC} won the first match against {PER} .",
    "{ORG} spokesman {PER} said the company lost {NUM} percent .",
    "{ANY} reported a loss for the year .",
    "fans of {ORG} left the city after the match .",
    "{PER} , who plays for {ORG} , will visit {LOC} in {MONTH} .",
    "the president of {LOC} met {MISC} officials on {DAY} .",
    "{ORG} fell {NUM} percent in {LOC} in {MONTH} .",
    "{PER} told the {MISC} league that {ORG} has a new coach .",
    "{ANY} and {ANY} were named in the report .",
    "the {MISC} minister {PER} left {LOC} after two days .",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ToyConfig {
    pub seed: u64,
    pub train_tokens: usize,
    pub dev_tokens: usize,
    pub test_tokens: usize,
}

impl Default for ToyConfig {
    fn default() -> Self {
        ToyConfig {
            seed: 7,
            train_tokens: 20_000,
            dev_tokens: 3_000,
            test_tokens: 3_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ToyCorpus {
    pub train: Corpus,
    pub dev: Corpus,
    pub test: Corpus,
}

/// Patterned sentences over a closed vocabulary of roughly 200 words with
/// gold labels in the `O, PER, ORG, LOC, MISC` inventory. Entities follow a
/// Zipf-like frequency profile; person and organization names may span
/// two tokens.
pub fn generate_toy(cfg: &ToyConfig) -> ToyCorpus {
    let labels = LabelSet::conll();
    let split = |name: &str, tokens: usize| {
        let mut rng = substream(cfg.seed, name, 0);
        let gen = Generator::new(&labels);
        let mut sentences = Vec::new();
        let mut count = 0;
        while count < tokens {
            let s = gen.sentence(&mut rng);
            count += s.len();
            sentences.push(s);
        }
        Corpus::from_sentences(sentences)
    };
    ToyCorpus {
        train: split("toy-train", cfg.train_tokens),
        dev: split("toy-dev", cfg.dev_tokens),
        test: split("toy-test", cfg.test_tokens),
    }
}

/// Every word the generator can emit, sorted.
pub fn toy_vocabulary() -> Vec<String> {
    let mut words: BTreeSet<&str> = BTreeSet::new();
    for list in [
        FIRST_NAMES,
        LAST_NAMES,
        ORG_HEADS,
        ORG_SUFFIXES,
        LOCATIONS,
        MISC,
        DAYS,
        MONTHS,
        NUMBERS,
    ] {
        words.extend(list.iter().copied());
    }
    for t in TEMPLATES {
        words.extend(t.split(' ').filter(|w| !w.starts_with('{')));
    }
    words.into_iter().map(String::from).collect()
}

/// The bundled gazetteer and blocklist.
pub fn toy_gazetteer(labels: &LabelSet) -> Gazetteer {
    let mut g = Gazetteer::new(labels.clone());
    g.load_entries(TOY_GAZETTEER)
        .expect("bundled gazetteer parses");
    g.load_blocklist(TOY_BLOCKLIST);
    g
}

struct Generator {
    per: usize,
    org: usize,
    loc: usize,
    misc: usize,
    null: usize,
    first: WeightedIndex<f64>,
    last: WeightedIndex<f64>,
    orgs: WeightedIndex<f64>,
    locs: WeightedIndex<f64>,
    miscs: WeightedIndex<f64>,
}

fn zipf(n: usize) -> WeightedIndex<f64> {
    WeightedIndex::new((1..=n).map(|r| 1.0 / r as f64)).expect("positive weights")
}

impl Generator {
    fn new(labels: &LabelSet) -> Self {
        let idx = |n| labels.index(n).expect("conll class");
        Generator {
            per: idx("PER"),
            org: idx("ORG"),
            loc: idx("LOC"),
            misc: idx("MISC"),
            null: labels.null(),
            first: zipf(FIRST_NAMES.len()),
            last: zipf(LAST_NAMES.len()),
            orgs: zipf(ORG_HEADS.len()),
            locs: zipf(LOCATIONS.len()),
            miscs: zipf(MISC.len()),
        }
    }

    fn sentence(&self, rng: &mut ChaCha8Rng) -> Sentence {
        let template = TEMPLATES[rng.gen_range(0..TEMPLATES.len())];
        let mut tokens = Vec::new();
        let mut labels = Vec::new();
        let mut push = |words: Vec<&str>, class: usize| {
            for w in words {
                tokens.push(w.to_string());
                labels.push(class);
            }
        };
        for piece in template.split(' ') {
            let slot = match piece {
                "{ANY}" => ["{PER}", "{ORG}", "{LOC}"][rng.gen_range(0..3)],
                other => other,
            };
            match slot {
                "{PER}" => {
                    let first = FIRST_NAMES[self.first.sample(rng)];
                    let last = LAST_NAMES[self.last.sample(rng)];
                    let words = match rng.gen_range(0..10) {
                        0..=4 => vec![first, last],
                        5..=8 => vec![last],
                        _ => vec![first],
                    };
                    push(words, self.per);
                }
                "{ORG}" => {
                    let head = ORG_HEADS[self.orgs.sample(rng)];
                    let words = if rng.gen_bool(0.4) {
                        vec![head, ORG_SUFFIXES[rng.gen_range(0..ORG_SUFFIXES.len())]]
                    } else {
                        vec![head]
                    };
                    push(words, self.org);
                }
                "{LOC}" => push(vec![LOCATIONS[self.locs.sample(rng)]], self.loc),
                "{MISC}" => push(vec![MISC[self.miscs.sample(rng)]], self.misc),
                "{DAY}" => push(vec![DAYS[rng.gen_range(0..DAYS.len())]], self.null),
                "{MONTH}" => push(vec![MONTHS[rng.gen_range(0..MONTHS.len())]], self.null),
                "{NUM}" => push(vec![NUMBERS[rng.gen_range(0..NUMBERS.len())]], self.null),
                word => push(vec![word], self.null),
            }
        }
        Sentence::labeled(tokens, labels)
    }
}
