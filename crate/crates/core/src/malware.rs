//! Catalog of real P2P malware profiles and their propagation behaviors.
//!
//! Each profile records the ordinal security attributes reported for one
//! virus family, the bait filenames it hides behind, and which of the two
//! P2P propagation tricks it uses: planting disguised copies of itself in
//! the shared folder, or answering arbitrary queries with a fabricated
//! `.exe` hit (query-hit spoofing).

use std::collections::HashSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

const BUILTIN_CATALOG: &str = include_str!("builtin_catalog.txt");

/// Three-level ordinal scale. Easy/Moderate/Difficult map onto the same
/// 1/2/3 ranks as Low/Medium/High.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OrdinalLevel {
    Low,
    Medium,
    High,
}

impl OrdinalLevel {
    /// Integer rank: Low = 1, Medium = 2, High = 3.
    pub fn rank(&self) -> u8 {
        match self {
            OrdinalLevel::Low => 1,
            OrdinalLevel::Medium => 2,
            OrdinalLevel::High => 3,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "low" | "easy" => Ok(OrdinalLevel::Low),
            "medium" | "moderate" => Ok(OrdinalLevel::Medium),
            "high" | "difficult" => Ok(OrdinalLevel::High),
            other => Err(Error::config(format!("unknown ordinal level '{other}'"))),
        }
    }
}

impl fmt::Display for OrdinalLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            OrdinalLevel::Low => "Low",
            OrdinalLevel::Medium => "Medium",
            OrdinalLevel::High => "High",
        };
        write!(f, "{s}")
    }
}

/// Reported count bucket, as the case studies print them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CountRange {
    /// Closed range `lo - hi`.
    Range(u64, u64),
    /// Open-ended `above lo`.
    Above(u64),
}

impl CountRange {
    /// The largest count the bucket is known to contain; `Above` buckets
    /// only guarantee their lower bound.
    pub fn representative(&self) -> u64 {
        match self {
            CountRange::Range(_, hi) => *hi,
            CountRange::Above(lo) => *lo,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("above ") {
            let lo = rest
                .trim()
                .parse()
                .map_err(|_| Error::config(format!("bad count range '{s}'")))?;
            return Ok(CountRange::Above(lo));
        }
        if let Some((lo, hi)) = s.split_once('-') {
            let lo: u64 = lo
                .trim()
                .parse()
                .map_err(|_| Error::config(format!("bad count range '{s}'")))?;
            let hi: u64 = hi
                .trim()
                .parse()
                .map_err(|_| Error::config(format!("bad count range '{s}'")))?;
            if lo > hi {
                return Err(Error::config(format!(
                    "count range '{s}' has lower > upper"
                )));
            }
            return Ok(CountRange::Range(lo, hi));
        }
        Err(Error::config(format!("bad count range '{s}'")))
    }
}

impl fmt::Display for CountRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CountRange::Range(lo, hi) => write!(f, "{lo} - {hi}"),
            CountRange::Above(lo) => write!(f, "above {lo}"),
        }
    }
}

/// One malware case study. Ordinal fields are `None` where the source
/// reports nothing; scoring maps those to 0.
#[derive(Debug, Clone, PartialEq)]
pub struct VirusProfile {
    pub name: String,
    pub aliases: Vec<String>,
    /// Family label, e.g. "Wild worm" or "Trojan".
    pub kind: String,
    pub untamed_level: Option<OrdinalLevel>,
    pub infection_nodes: Option<CountRange>,
    pub site_count: Option<CountRange>,
    pub geo_distribution: Option<OrdinalLevel>,
    /// How hard the threat is to contain (Easy = Low).
    pub threat_restraint: Option<OrdinalLevel>,
    /// Removal difficulty (Easy = Low).
    pub removal: Option<OrdinalLevel>,
    pub damage_intensity: Option<OrdinalLevel>,
    pub distribution_intensity: Option<OrdinalLevel>,
    pub author: Option<String>,
    /// Bait filenames the worm hides behind when planting copies.
    pub disguise_filenames: Vec<String>,
    /// Number of disguised copies planted per infection.
    pub copies_per_infection: u32,
    /// True for worms that answer arbitrary queries with a fabricated hit.
    pub spoofs_query_hits: bool,
}

impl VirusProfile {
    pub fn validate(&self) -> Result<()> {
        if self.name.trim().is_empty() {
            return Err(Error::config("profile name must be nonempty"));
        }
        if self.copies_per_infection < 1 {
            return Err(Error::config(format!(
                "profile '{}': copies_per_infection must be >= 1",
                self.name
            )));
        }
        if self.disguise_filenames.is_empty() {
            return Err(Error::config(format!(
                "profile '{}': disguise filename list must be nonempty",
                self.name
            )));
        }
        Ok(())
    }
}

/// The eight comparison scores, each in {0, 1, 2, 3} with 0 meaning
/// unknown / not reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SecurityScoreVector {
    pub damage: u8,
    pub distribution: u8,
    pub removal_difficulty: u8,
    pub threat_containment: u8,
    pub geographical_distribution: u8,
    pub source_sites: u8,
    pub infections: u8,
    pub wild_level: u8,
}

impl SecurityScoreVector {
    pub const COLUMNS: [&'static str; 8] = [
        "damage",
        "distribution",
        "removal_difficulty",
        "threat_containment",
        "geographical_distribution",
        "source_sites",
        "infections",
        "wild_level",
    ];

    pub fn as_array(&self) -> [u8; 8] {
        [
            self.damage,
            self.distribution,
            self.removal_difficulty,
            self.threat_containment,
            self.geographical_distribution,
            self.source_sites,
            self.infections,
            self.wild_level,
        ]
    }
}

fn ordinal_score(level: Option<OrdinalLevel>) -> u8 {
    level.map_or(0, |l| l.rank())
}

/// Buckets a reported count: below `mid_lo` scores 1, `[mid_lo, high_lo)`
/// scores 2, `high_lo` and above scores 3. Unknown counts score 0.
fn count_score(range: Option<CountRange>, mid_lo: u64, high_lo: u64) -> u8 {
    match range {
        None => 0,
        Some(r) => {
            let rep = r.representative();
            if rep >= high_lo {
                3
            } else if rep >= mid_lo {
                2
            } else {
                1
            }
        }
    }
}

/// Scores a profile on the eight security parameters.
///
/// Infection counts bucket as 0-49 / 50-999 / 1000+, source sites as
/// 0-2 / 3-9 / 10+, matching the buckets the case studies report.
pub fn score_profile(profile: &VirusProfile) -> SecurityScoreVector {
    SecurityScoreVector {
        damage: ordinal_score(profile.damage_intensity),
        distribution: ordinal_score(profile.distribution_intensity),
        removal_difficulty: ordinal_score(profile.removal),
        threat_containment: ordinal_score(profile.threat_restraint),
        geographical_distribution: ordinal_score(profile.geo_distribution),
        source_sites: count_score(profile.site_count, 3, 10),
        infections: count_score(profile.infection_nodes, 50, 1000),
        wild_level: ordinal_score(profile.untamed_level),
    }
}

/// Scores every profile, preserving row order.
pub fn compare_catalog(
    profiles: &[VirusProfile],
) -> Result<Vec<(String, SecurityScoreVector)>> {
    if profiles.is_empty() {
        return Err(Error::config("cannot compare an empty profile list"));
    }
    Ok(profiles
        .iter()
        .map(|p| (p.name.clone(), score_profile(p)))
        .collect())
}

// ---------------------------------------------------------------------------
// Catalog container and file format
// ---------------------------------------------------------------------------

/// An ordered set of profiles with unique names.
#[derive(Debug, Clone, PartialEq)]
pub struct Catalog {
    profiles: Vec<VirusProfile>,
}

impl Catalog {
    pub fn from_profiles(profiles: Vec<VirusProfile>) -> Result<Self> {
        let mut seen = HashSet::new();
        for p in &profiles {
            p.validate()?;
            if !seen.insert(p.name.clone()) {
                return Err(Error::config(format!(
                    "duplicate profile name '{}' in catalog",
                    p.name
                )));
            }
        }
        Ok(Self { profiles })
    }

    pub fn profiles(&self) -> &[VirusProfile] {
        &self.profiles
    }

    pub fn names(&self) -> Vec<&str> {
        self.profiles.iter().map(|p| p.name.as_str()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&VirusProfile> {
        self.profiles.iter().find(|p| p.name == name)
    }

    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }
}

/// The seven built-in case-study profiles.
pub fn builtin_catalog() -> Catalog {
    parse_catalog(BUILTIN_CATALOG).expect("embedded catalog must parse")
}

/// The embedded catalog file, verbatim.
pub fn builtin_catalog_text() -> &'static str {
    BUILTIN_CATALOG
}

fn parse_optional_ordinal(value: &str) -> Result<Option<OrdinalLevel>> {
    if value.eq_ignore_ascii_case("unknown") {
        Ok(None)
    } else {
        OrdinalLevel::parse(value).map(Some)
    }
}

fn parse_optional_range(value: &str) -> Result<Option<CountRange>> {
    if value.eq_ignore_ascii_case("unknown") {
        Ok(None)
    } else {
        CountRange::parse(value).map(Some)
    }
}

fn parse_list(value: &str) -> Vec<String> {
    if value.trim().is_empty() {
        Vec::new()
    } else {
        value.split('|').map(|s| s.trim().to_string()).collect()
    }
}

/// Parses the line-oriented catalog format: `field: value` pairs, `#`
/// comments, one profile per blank-line-separated block.
pub fn parse_catalog(text: &str) -> Result<Catalog> {
    let mut profiles = Vec::new();
    let mut block: Vec<(usize, String, String)> = Vec::new();

    let flush = |block: &mut Vec<(usize, String, String)>,
                 profiles: &mut Vec<VirusProfile>|
     -> Result<()> {
        if block.is_empty() {
            return Ok(());
        }
        profiles.push(parse_profile_block(block)?);
        block.clear();
        Ok(())
    };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            flush(&mut block, &mut profiles)?;
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once(':').ok_or(Error::CatalogParse {
            line: line_no,
            detail: "expected `field: value`".into(),
        })?;
        block.push((line_no, key.trim().to_string(), value.trim().to_string()));
    }
    flush(&mut block, &mut profiles)?;
    Catalog::from_profiles(profiles)
}

fn parse_profile_block(fields: &[(usize, String, String)]) -> Result<VirusProfile> {
    let first_line = fields[0].0;
    let mut name = None;
    let mut aliases = Vec::new();
    let mut kind = None;
    let mut untamed_level = None;
    let mut infection_nodes = None;
    let mut site_count = None;
    let mut geo_distribution = None;
    let mut threat_restraint = None;
    let mut removal = None;
    let mut damage_intensity = None;
    let mut distribution_intensity = None;
    let mut author = None;
    let mut disguise_filenames = Vec::new();
    let mut copies_per_infection = None;
    let mut spoofs_query_hits = None;

    for (line, key, value) in fields {
        let line = *line;
        match key.as_str() {
            "name" => name = Some(value.clone()),
            "aliases" => aliases = parse_list(value),
            "kind" => kind = Some(value.clone()),
            "untamed_level" => untamed_level = parse_optional_ordinal(value)?,
            "infection_nodes" => infection_nodes = parse_optional_range(value)?,
            "site_count" => site_count = parse_optional_range(value)?,
            "geo_distribution" => geo_distribution = parse_optional_ordinal(value)?,
            "threat_restraint" => threat_restraint = parse_optional_ordinal(value)?,
            "removal" => removal = parse_optional_ordinal(value)?,
            "damage_intensity" => damage_intensity = parse_optional_ordinal(value)?,
            "distribution_intensity" => distribution_intensity = parse_optional_ordinal(value)?,
            "author" => {
                author = if value.eq_ignore_ascii_case("unknown") {
                    None
                } else {
                    Some(value.clone())
                }
            }
            "disguise_filenames" => disguise_filenames = parse_list(value),
            "copies_per_infection" => {
                copies_per_infection = Some(value.parse().map_err(|_| Error::CatalogParse {
                    line,
                    detail: format!("bad copies_per_infection '{value}'"),
                })?)
            }
            "spoofs_query_hits" => {
                spoofs_query_hits = Some(value.parse().map_err(|_| Error::CatalogParse {
                    line,
                    detail: format!("bad spoofs_query_hits '{value}'"),
                })?)
            }
            other => {
                return Err(Error::CatalogParse {
                    line,
                    detail: format!("unknown field '{other}'"),
                })
            }
        }
    }

    let profile = VirusProfile {
        name: name.ok_or(Error::CatalogParse {
            line: first_line,
            detail: "profile block missing `name`".into(),
        })?,
        aliases,
        kind: kind.unwrap_or_else(|| "Wild worm".to_string()),
        untamed_level,
        infection_nodes,
        site_count,
        geo_distribution,
        threat_restraint,
        removal,
        damage_intensity,
        distribution_intensity,
        author,
        disguise_filenames,
        copies_per_infection: copies_per_infection.unwrap_or(5),
        spoofs_query_hits: spoofs_query_hits.unwrap_or(false),
    };
    profile.validate()?;
    Ok(profile)
}

fn fmt_optional_ordinal(level: Option<OrdinalLevel>) -> String {
    level.map_or_else(|| "unknown".to_string(), |l| l.to_string())
}

fn fmt_optional_range(range: Option<CountRange>) -> String {
    range.map_or_else(|| "unknown".to_string(), |r| r.to_string())
}

/// Serializes a catalog back into the file format; `parse_catalog` of the
/// result reproduces the input.
pub fn serialize_catalog(catalog: &Catalog) -> String {
    let mut out = String::new();
    for (idx, p) in catalog.profiles().iter().enumerate() {
        if idx > 0 {
            out.push('\n');
        }
        out.push_str(&format!("name: {}\n", p.name));
        out.push_str(&format!("kind: {}\n", p.kind));
        out.push_str(&format!("aliases: {}\n", p.aliases.join(" | ")));
        out.push_str(&format!(
            "untamed_level: {}\n",
            fmt_optional_ordinal(p.untamed_level)
        ));
        out.push_str(&format!(
            "infection_nodes: {}\n",
            fmt_optional_range(p.infection_nodes)
        ));
        out.push_str(&format!("site_count: {}\n", fmt_optional_range(p.site_count)));
        out.push_str(&format!(
            "geo_distribution: {}\n",
            fmt_optional_ordinal(p.geo_distribution)
        ));
        out.push_str(&format!(
            "threat_restraint: {}\n",
            fmt_optional_ordinal(p.threat_restraint)
        ));
        out.push_str(&format!("removal: {}\n", fmt_optional_ordinal(p.removal)));
        out.push_str(&format!(
            "damage_intensity: {}\n",
            fmt_optional_ordinal(p.damage_intensity)
        ));
        out.push_str(&format!(
            "distribution_intensity: {}\n",
            fmt_optional_ordinal(p.distribution_intensity)
        ));
        out.push_str(&format!(
            "author: {}\n",
            p.author.clone().unwrap_or_else(|| "unknown".to_string())
        ));
        out.push_str(&format!(
            "disguise_filenames: {}\n",
            p.disguise_filenames.join(" | ")
        ));
        out.push_str(&format!("copies_per_infection: {}\n", p.copies_per_infection));
        out.push_str(&format!("spoofs_query_hits: {}\n", p.spoofs_query_hits));
    }
    out
}

// ---------------------------------------------------------------------------
// Shared folders and propagation behaviors
// ---------------------------------------------------------------------------

/// One file in a peer's shared folder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileEntry {
    pub name: String,
    pub infected: bool,
    /// Name of the virus profile that produced an infected file.
    pub source: Option<String>,
}

impl FileEntry {
    pub fn benign(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            infected: false,
            source: None,
        }
    }

    pub fn infected(name: impl Into<String>, source: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            infected: true,
            source: Some(source.into()),
        }
    }
}

/// A peer's shared folder.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SharedFolder {
    files: Vec<FileEntry>,
}

impl SharedFolder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, entry: FileEntry) {
        self.files.push(entry);
    }

    pub fn files(&self) -> &[FileEntry] {
        &self.files
    }

    pub fn len(&self) -> usize {
        self.files.len()
    }

    pub fn is_empty(&self) -> bool {
        self.files.is_empty()
    }

    pub fn contains_name(&self, name: &str) -> bool {
        self.files.iter().any(|f| f.name == name)
    }

    /// First entry matching `name`, if any.
    pub fn find(&self, name: &str) -> Option<&FileEntry> {
        self.files.iter().find(|f| f.name == name)
    }

    pub fn infected_count(&self) -> usize {
        self.files.iter().filter(|f| f.infected).count()
    }

    /// Drops every infected entry (recovery cleanup). Returns how many
    /// files were removed.
    pub fn remove_infected(&mut self) -> usize {
        let before = self.files.len();
        self.files.retain(|f| !f.infected);
        before - self.files.len()
    }
}

/// Appends `-k` before the filename extension: `Resume.exe` becomes
/// `Resume-1.exe`.
fn suffixed_name(base: &str, k: usize) -> String {
    match base.rfind('.') {
        Some(idx) if idx > 0 => format!("{}-{}{}", &base[..idx], k, &base[idx..]),
        _ => format!("{base}-{k}"),
    }
}

/// Plants `copies_per_infection` disguised copies of the worm into
/// `folder`.
///
/// Names are drawn without replacement from the profile's disguise list
/// (order randomized by `rng`), cycling with numeric suffixes once the
/// list is exhausted. Pre-existing entries are never renamed or removed,
/// and every planted name is unique within the folder.
pub fn plant_copies(folder: &mut SharedFolder, profile: &VirusProfile, rng: &mut impl Rng) {
    let mut order: Vec<&String> = profile.disguise_filenames.iter().collect();
    order.shuffle(rng);

    let count = profile.copies_per_infection as usize;
    for draw in 0..count {
        let base = order[draw % order.len()];
        let mut name = base.clone();
        let mut k = 0;
        while folder.contains_name(&name) {
            k += 1;
            name = suffixed_name(base, k);
        }
        folder.push(FileEntry::infected(name, profile.name.clone()));
    }
}

/// Fabricates the query-hit filename a spoofing worm answers with: the
/// keyword with any extension stripped and `.exe` appended.
pub fn spoof_hit(profile: &VirusProfile, keyword: &str) -> Result<String> {
    if !profile.spoofs_query_hits {
        return Err(Error::config(format!(
            "profile '{}' does not spoof query hits",
            profile.name
        )));
    }
    if keyword.is_empty() {
        return Err(Error::config("cannot spoof a hit for an empty keyword"));
    }
    let stem = match keyword.rfind('.') {
        Some(idx) if idx > 0 => &keyword[..idx],
        _ => keyword,
    };
    Ok(format!("{stem}.exe"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn swen() -> VirusProfile {
        builtin_catalog().get("Swen").unwrap().clone()
    }

    #[test]
    fn builtin_catalog_has_the_seven_case_studies() {
        let catalog = builtin_catalog();
        assert_eq!(
            catalog.names(),
            vec![
                "Swen",
                "Fizzer",
                "Mandragore",
                "Lirva",
                "Benjamin",
                "Lolol.a",
                "Magic Eight Ball"
            ]
        );
    }

    #[test]
    fn swen_profile_matches_its_case_study() {
        let p = swen();
        assert_eq!(p.kind, "Wild worm");
        assert_eq!(p.untamed_level, Some(OrdinalLevel::Low));
        assert_eq!(p.infection_nodes, Some(CountRange::Above(1000)));
        assert_eq!(p.site_count, Some(CountRange::Above(10)));
        assert_eq!(p.damage_intensity, Some(OrdinalLevel::Medium));
        assert_eq!(p.removal, Some(OrdinalLevel::High));
        assert_eq!(p.author.as_deref(), Some("John Canavan"));
        assert!(!p.spoofs_query_hits);
    }

    #[test]
    fn mandragore_spoofs_and_sits_in_the_low_buckets() {
        let catalog = builtin_catalog();
        let p = catalog.get("Mandragore").unwrap();
        assert!(p.spoofs_query_hits);
        assert_eq!(p.infection_nodes, Some(CountRange::Range(0, 49)));
        assert_eq!(p.site_count, Some(CountRange::Range(0, 2)));
        assert_eq!(p.removal, Some(OrdinalLevel::Low));
    }

    #[test]
    fn benjamin_floods_with_a_hundred_copies() {
        let catalog = builtin_catalog();
        let p = catalog.get("Benjamin").unwrap();
        assert_eq!(p.copies_per_infection, 100);
        assert_eq!(p.damage_intensity, Some(OrdinalLevel::High));
        assert_eq!(p.distribution_intensity, Some(OrdinalLevel::Low));
        assert_eq!(p.infection_nodes, None);
    }

    #[test]
    fn lirva_ships_its_published_bait_list() {
        let catalog = builtin_catalog();
        let p = catalog.get("Lirva").unwrap();
        assert_eq!(p.disguise_filenames.len(), 10);
        assert!(p.disguise_filenames.contains(&"Resume.exe".to_string()));
        assert!(p.disguise_filenames.contains(&"IAmWiThYoU.exe".to_string()));
    }

    #[test]
    fn swen_scores() {
        let scores = score_profile(&swen());
        assert_eq!(scores.as_array(), [2, 3, 3, 1, 3, 3, 3, 1]);
    }

    #[test]
    fn mandragore_scores_low_across_the_count_buckets() {
        let catalog = builtin_catalog();
        let scores = score_profile(catalog.get("Mandragore").unwrap());
        assert_eq!(scores.infections, 1);
        assert_eq!(scores.source_sites, 1);
        assert_eq!(scores.geographical_distribution, 1);
    }

    #[test]
    fn unreported_profile_scores_all_zero() {
        let catalog = builtin_catalog();
        let scores = score_profile(catalog.get("Magic Eight Ball").unwrap());
        assert_eq!(scores.as_array(), [0u8; 8]);
    }

    #[test]
    fn compare_catalog_preserves_rows() {
        let catalog = builtin_catalog();
        let matrix = compare_catalog(catalog.profiles()).unwrap();
        assert_eq!(matrix.len(), 7);
        assert_eq!(matrix[0].0, "Swen");
        assert_eq!(matrix[0].1, score_profile(&swen()));

        let single = compare_catalog(&[swen()]).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].1, score_profile(&swen()));

        assert!(compare_catalog(&[]).is_err());
    }

    #[test]
    fn catalog_round_trips_through_the_file_format() {
        let catalog = builtin_catalog();
        let text = serialize_catalog(&catalog);
        let reparsed = parse_catalog(&text).unwrap();
        assert_eq!(catalog, reparsed);
    }

    #[test]
    fn catalog_parse_reports_line_numbers() {
        let err = parse_catalog("name: X\nbogus_field: 1\ndisguise_filenames: a.exe\n");
        match err {
            Err(Error::CatalogParse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn plant_copies_adds_exactly_n_distinct_names() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut profile = swen();
        profile.copies_per_infection = 3;
        let mut folder = SharedFolder::new();
        plant_copies(&mut folder, &profile, &mut rng);
        assert_eq!(folder.len(), 3);
        assert_eq!(folder.infected_count(), 3);
        let names: HashSet<_> = folder.files().iter().map(|f| f.name.clone()).collect();
        assert_eq!(names.len(), 3);
        for f in folder.files() {
            assert!(profile.disguise_filenames.contains(&f.name));
            assert_eq!(f.source.as_deref(), Some("Swen"));
        }
    }

    #[test]
    fn plant_copies_leaves_existing_files_alone() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut profile = swen();
        profile.copies_per_infection = 1;
        let mut folder = SharedFolder::new();
        folder.push(FileEntry::benign("summer_mix.mp3"));
        folder.push(FileEntry::benign("holiday.jpg"));
        plant_copies(&mut folder, &profile, &mut rng);
        assert_eq!(folder.len(), 3);
        assert_eq!(folder.files()[0], FileEntry::benign("summer_mix.mp3"));
        assert_eq!(folder.files()[1], FileEntry::benign("holiday.jpg"));
    }

    #[test]
    fn plant_copies_cycles_with_suffixes_beyond_the_list() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut profile = swen();
        profile.disguise_filenames = vec![
            "a.exe".to_string(),
            "b.exe".to_string(),
            "c.exe".to_string(),
        ];
        profile.copies_per_infection = 5;
        let mut folder = SharedFolder::new();
        plant_copies(&mut folder, &profile, &mut rng);
        assert_eq!(folder.len(), 5);
        let names: HashSet<_> = folder.files().iter().map(|f| f.name.clone()).collect();
        assert_eq!(names.len(), 5, "suffixed names must stay distinct");
    }

    #[test]
    fn spoofed_hits_rewrite_the_extension() {
        let catalog = builtin_catalog();
        let mandragore = catalog.get("Mandragore").unwrap();
        assert_eq!(spoof_hit(mandragore, "song.mp3").unwrap(), "song.exe");
        assert_eq!(spoof_hit(mandragore, "readme").unwrap(), "readme.exe");
        assert_eq!(spoof_hit(mandragore, "a.b.c").unwrap(), "a.b.exe");
        assert!(spoof_hit(mandragore, "").is_err());
        assert!(spoof_hit(&swen(), "song.mp3").is_err());
    }

    fn arb_ordinal() -> impl Strategy<Value = Option<OrdinalLevel>> {
        prop_oneof![
            Just(None),
            Just(Some(OrdinalLevel::Low)),
            Just(Some(OrdinalLevel::Medium)),
            Just(Some(OrdinalLevel::High)),
        ]
    }

    fn arb_range() -> impl Strategy<Value = Option<CountRange>> {
        prop_oneof![
            Just(None),
            (0u64..2000).prop_map(CountRange::Above).prop_map(Some),
            (0u64..2000, 0u64..2000)
                .prop_map(|(a, b)| CountRange::Range(a.min(b), a.max(b)))
                .prop_map(Some),
        ]
    }

    fn arb_profile() -> impl Strategy<Value = VirusProfile> {
        (
            arb_ordinal(),
            arb_ordinal(),
            arb_ordinal(),
            arb_ordinal(),
            arb_ordinal(),
            arb_range(),
            arb_range(),
            1u32..20,
        )
            .prop_map(
                |(untamed, geo, threat, removal, damage, nodes, sites, copies)| VirusProfile {
                    name: "Test".into(),
                    aliases: vec![],
                    kind: "Wild worm".into(),
                    untamed_level: untamed,
                    infection_nodes: nodes,
                    site_count: sites,
                    geo_distribution: geo,
                    threat_restraint: threat,
                    removal,
                    damage_intensity: damage,
                    distribution_intensity: untamed,
                    author: None,
                    disguise_filenames: vec!["x.exe".into(), "y.exe".into()],
                    copies_per_infection: copies,
                    spoofs_query_hits: false,
                },
            )
    }

    proptest! {
        #[test]
        fn scores_stay_in_range(profile in arb_profile()) {
            for score in score_profile(&profile).as_array() {
                prop_assert!(score <= 3);
            }
        }

        #[test]
        fn raising_an_ordinal_never_lowers_a_score(profile in arb_profile()) {
            let base = score_profile(&profile).as_array();
            let mut raised = profile.clone();
            raised.damage_intensity = Some(OrdinalLevel::High);
            raised.untamed_level = Some(OrdinalLevel::High);
            raised.geo_distribution = Some(OrdinalLevel::High);
            raised.threat_restraint = Some(OrdinalLevel::High);
            raised.removal = Some(OrdinalLevel::High);
            raised.distribution_intensity = Some(OrdinalLevel::High);
            let bumped = score_profile(&raised).as_array();
            for (lo, hi) in base.iter().zip(bumped.iter()) {
                prop_assert!(hi >= lo);
            }
        }

        #[test]
        fn planting_is_additive(existing in 0usize..6, copies in 1u32..12) {
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            let mut profile = builtin_catalog().get("Swen").unwrap().clone();
            profile.copies_per_infection = copies;
            let mut folder = SharedFolder::new();
            for k in 0..existing {
                folder.push(FileEntry::benign(format!("file{k}.mp3")));
            }
            let before: Vec<_> = folder.files().to_vec();
            plant_copies(&mut folder, &profile, &mut rng);
            prop_assert_eq!(folder.len(), existing + copies as usize);
            prop_assert_eq!(&folder.files()[..existing], &before[..]);
            let names: HashSet<_> = folder.files().iter().map(|f| f.name.as_str()).collect();
            prop_assert_eq!(names.len(), folder.len());
        }
    }
}
