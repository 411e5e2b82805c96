//! Semantic analysis: assigns a concept type to every node, validates filter
//! applicability and function arguments against the catalog, resolves
//! attribute names, and expands literal shortcuts into identity predicates.
//! The output IR ([`TypedExpr`]) is what both the SQL generator and the
//! reference evaluator consume, so its constructors are the single definition
//! of what a query means.

use crate::ast::{AttributeQuery, Concept, ConceptQuery, Expr, FilterArg, FunctionCall, FunctionName, Navigation};
use crate::catalog::{self, EntityType, FilterKeyword, ParamKind};
use crate::error::AnalyzeError;
use crate::model::{PubType, Role, VenueKind};
use crate::token::Span;

/// A typed query, ready for lowering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypedExpr {
    /// Entity query: the result is a set of concept instances.
    Entities(EntityExpr),
    /// `COUNT (subquery)`: one row with the cardinality of the subquery.
    Count { arg: EntityExpr, limit: Option<u64> },
    /// `MOST CITED (subquery)`: top-k publications by citation count,
    /// descending; publications without citations are excluded.
    MostCited { arg: EntityExpr, k: u64 },
    /// `KEYWORDS OF (subquery)`: distinct keywords of the subquery members.
    KeywordsOf { arg: EntityExpr, limit: Option<u64> },
    /// `"attr" OF expr`: distinct non-null values of one attribute.
    AttributeOf { attribute: Attribute, source: EntityExpr },
}

/// An expression producing a set of entities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EntityExpr {
    Set(EntitySet),
    /// `CONFERENCE OF (P)` / `JOURNAL OF (P)`: venues in which some member
    /// of the publication set P appeared.
    VenuesOf { kind: VenueKind, source: Box<EntityExpr> },
}

impl EntityExpr {
    /// The concept this expression returns.
    pub fn entity(&self) -> EntityType {
        match self {
            EntityExpr::Set(s) => s.entity,
            EntityExpr::VenuesOf { kind: VenueKind::Conference, .. } => EntityType::Conference,
            EntityExpr::VenuesOf { kind: VenueKind::Journal, .. } => EntityType::Journal,
        }
    }
}

/// A filtered concept set. Specializations appear as a leading restriction
/// predicate, so `ARTICLES X` and `PUBLICATIONS X` differ by exactly one
/// predicate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntitySet {
    pub entity: EntityType,
    pub predicates: Vec<Predicate>,
    pub limit: Option<u64>,
}

/// Argument of the venue-valued filters (APPEARED IN, PUBLISHED IN), which
/// accept conferences and journals alike. A bare literal matches venues of
/// either kind by dblp key or acronym.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VenueSelector {
    Venues(EntityExpr),
    Literal(String),
}

/// One typed filter. Subquery-valued predicates hold the analyzed subquery;
/// the `*Literal` variants are what literal-shortcut expansion produces: a
/// disjunctive identity match over the concept's literal fields.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Predicate {
    // Specialization restrictions.
    PubTypeIs(PubType),
    PersonHasRole(Role),
    // Publication filters.
    PubPublishedBy(EntityExpr),
    PubAbout(String),
    PubWrittenBy(EntityExpr),
    PubEditedBy(EntityExpr),
    PubAppearedIn(VenueSelector),
    PubBefore(i64),
    PubInYear(i64),
    PubAfter(i64),
    PubTitled(String),
    PubReferences(EntityExpr),
    PubCitedBy(EntityExpr),
    /// dblp key or title matches.
    PubLiteral(String),
    // Person filters.
    PersonPublishedIn(VenueSelector),
    PersonPublishedWith(EntityExpr),
    PersonWorksFor(EntityExpr),
    PersonNamed(String),
    PersonOrcid(String),
    PersonAuthored(EntityExpr),
    PersonReferences(EntityExpr),
    PersonCitedBy(EntityExpr),
    /// dblp pid, any name alias, or orcid matches.
    PersonLiteral(String),
    // Conference and journal filters.
    VenueAcronym(String),
    VenueAbout(String),
    VenueBefore(i64),
    VenueInYear(i64),
    VenueAfter(i64),
    JournalNamed(String),
    JournalVolume(String),
    // Institution filters.
    InstNamed(String),
    InstCity(String),
    InstCountry(String),
    InstMembers(EntityExpr),
}

/// A resolved attribute name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Attribute {
    DblpKey,
    Title,
    Year,
    Type,
    PrimaryName,
    Orcid,
    Acronym,
    Name,
    Volume,
    City,
    Country,
}

impl Attribute {
    pub fn canonical(self) -> &'static str {
        match self {
            Attribute::DblpKey => "dblpKey",
            Attribute::Title => "title",
            Attribute::Year => "year",
            Attribute::Type => "type",
            Attribute::PrimaryName => "primaryName",
            Attribute::Orcid => "orcid",
            Attribute::Acronym => "acronym",
            Attribute::Name => "name",
            Attribute::Volume => "volume",
            Attribute::City => "city",
            Attribute::Country => "country",
        }
    }

    fn from_canonical(name: &str) -> Attribute {
        match name {
            "dblpKey" => Attribute::DblpKey,
            "title" => Attribute::Title,
            "year" => Attribute::Year,
            "type" => Attribute::Type,
            "primaryName" => Attribute::PrimaryName,
            "orcid" => Attribute::Orcid,
            "acronym" => Attribute::Acronym,
            "name" => Attribute::Name,
            "volume" => Attribute::Volume,
            "city" => Attribute::City,
            "country" => Attribute::Country,
            other => unreachable!("attribute {other} missing from the canonical list"),
        }
    }

    /// Resolves an attribute name (case-insensitively) against a concept's
    /// attribute list.
    pub fn resolve(entity: EntityType, input: &str) -> Option<Attribute> {
        entity
            .attributes()
            .iter()
            .find(|a| a.eq_ignore_ascii_case(input))
            .map(|a| Attribute::from_canonical(a))
    }

    /// Whether values of this attribute are integers rather than text.
    pub fn is_numeric(self) -> bool {
        matches!(self, Attribute::Year)
    }
}

/// Column names of a query's result, in order. Shared by the SQL pipeline
/// and the reference evaluator so their outputs are comparable.
pub fn output_columns(t: &TypedExpr) -> Vec<&'static str> {
    match t {
        TypedExpr::Entities(e) => vec![e.entity().default_column()],
        TypedExpr::Count { .. } => vec!["count"],
        TypedExpr::MostCited { .. } => vec!["title", "citationCount"],
        TypedExpr::KeywordsOf { .. } => vec!["keyword"],
        TypedExpr::AttributeOf { attribute, .. } => vec![attribute.canonical()],
    }
}

/// Maps a written concept to its base type and specialization restriction.
fn concept_base(c: Concept) -> (EntityType, Option<Predicate>) {
    match c {
        Concept::Publication => (EntityType::Publication, None),
        Concept::Article => (EntityType::Publication, Some(Predicate::PubTypeIs(PubType::Article))),
        Concept::Book => (EntityType::Publication, Some(Predicate::PubTypeIs(PubType::Book))),
        Concept::Chapter => (EntityType::Publication, Some(Predicate::PubTypeIs(PubType::Chapter))),
        Concept::Masterthesis => (EntityType::Publication, Some(Predicate::PubTypeIs(PubType::Masterthesis))),
        Concept::Phdthesis => (EntityType::Publication, Some(Predicate::PubTypeIs(PubType::Phdthesis))),
        Concept::Person => (EntityType::Person, None),
        Concept::Author => (EntityType::Person, Some(Predicate::PersonHasRole(Role::Author))),
        Concept::Editor => (EntityType::Person, Some(Predicate::PersonHasRole(Role::Editor))),
        Concept::Conference => (EntityType::Conference, None),
        Concept::Journal => (EntityType::Journal, None),
        Concept::Institution => (EntityType::Institution, None),
    }
}

/// What an expression returns, worded for error messages.
fn describe_result(e: &Expr) -> String {
    match e {
        Expr::Concept(c) => concept_base(c.concept).0.keyword_plural().to_string(),
        Expr::Navigation(n) => match n.target {
            VenueKind::Conference => "CONFERENCES".to_string(),
            VenueKind::Journal => "JOURNALS".to_string(),
        },
        Expr::Function(f) => format!("a {} result", f.function),
        Expr::Attribute(_) => "attribute values".to_string(),
    }
}

/// Type-checks a parsed query.
pub fn analyze(expr: &Expr) -> Result<TypedExpr, AnalyzeError> {
    match expr {
        Expr::Concept(c) => Ok(TypedExpr::Entities(EntityExpr::Set(analyze_concept_query(c)?))),
        Expr::Navigation(n) => Ok(TypedExpr::Entities(analyze_navigation(n)?)),
        Expr::Attribute(a) => analyze_attribute_query(a),
        Expr::Function(f) => analyze_function(f),
    }
}

/// Analyzes an expression required to be entity-typed (a function argument,
/// filter subquery, navigation source, or attribute source).
fn analyze_entity_expr(expr: &Expr, function: &str, expected: &str, span: Span) -> Result<EntityExpr, AnalyzeError> {
    match expr {
        Expr::Concept(c) => Ok(EntityExpr::Set(analyze_concept_query(c)?)),
        Expr::Navigation(n) => Ok(analyze_navigation(n)?),
        Expr::Function(_) | Expr::Attribute(_) => Err(AnalyzeError::FunctionArgTypeMismatch {
            function: function.to_string(),
            expected: expected.to_string(),
            found: describe_result(expr),
            span,
        }),
    }
}

fn analyze_function(f: &FunctionCall) -> Result<TypedExpr, AnalyzeError> {
    let name = f.function.text();
    match f.function {
        FunctionName::Count => {
            let arg = analyze_entity_expr(&f.arg, name, "a concept subquery", f.arg_span)?;
            Ok(TypedExpr::Count { arg, limit: f.limit.map(|l| l.n) })
        }
        FunctionName::MostCited => {
            let expected = "a subquery returning PUBLICATIONS";
            let arg = analyze_entity_expr(&f.arg, name, expected, f.arg_span)?;
            if arg.entity() != EntityType::Publication {
                return Err(AnalyzeError::FunctionArgTypeMismatch {
                    function: name.to_string(),
                    expected: expected.to_string(),
                    found: arg.entity().keyword_plural().to_string(),
                    span: f.arg_span,
                });
            }
            Ok(TypedExpr::MostCited { arg, k: f.limit.map_or(5, |l| l.n) })
        }
        FunctionName::KeywordsOf => {
            let expected = "a subquery returning PUBLICATIONS, CONFERENCES, or JOURNALS";
            let arg = analyze_entity_expr(&f.arg, name, expected, f.arg_span)?;
            if !matches!(arg.entity(), EntityType::Publication | EntityType::Conference | EntityType::Journal) {
                return Err(AnalyzeError::FunctionArgTypeMismatch {
                    function: name.to_string(),
                    expected: expected.to_string(),
                    found: arg.entity().keyword_plural().to_string(),
                    span: f.arg_span,
                });
            }
            Ok(TypedExpr::KeywordsOf { arg, limit: f.limit.map(|l| l.n) })
        }
    }
}

fn analyze_navigation(n: &Navigation) -> Result<EntityExpr, AnalyzeError> {
    let name = match n.target {
        VenueKind::Conference => "CONFERENCE OF",
        VenueKind::Journal => "JOURNAL OF",
    };
    let expected = "a subquery returning PUBLICATIONS";
    let source = analyze_entity_expr(&n.source, name, expected, n.source_span)?;
    if source.entity() != EntityType::Publication {
        return Err(AnalyzeError::FunctionArgTypeMismatch {
            function: name.to_string(),
            expected: expected.to_string(),
            found: source.entity().keyword_plural().to_string(),
            span: n.source_span,
        });
    }
    Ok(EntityExpr::VenuesOf { kind: n.target, source: Box::new(source) })
}

fn analyze_attribute_query(a: &AttributeQuery) -> Result<TypedExpr, AnalyzeError> {
    let source = analyze_entity_expr(&a.source, "attribute access", "a concept subquery", a.source.span())?;
    let entity = source.entity();
    let Some(attribute) = Attribute::resolve(entity, &a.attribute) else {
        return Err(AnalyzeError::UnknownAttribute {
            attribute: a.attribute.clone(),
            concept: entity,
            valid: entity.attributes().join(", "),
            span: a.attribute_span,
        });
    };
    Ok(TypedExpr::AttributeOf { attribute, source })
}

fn analyze_concept_query(c: &ConceptQuery) -> Result<EntitySet, AnalyzeError> {
    let (entity, restriction) = concept_base(c.concept);
    let mut predicates = Vec::with_capacity(c.filters.len() + 1);
    predicates.extend(restriction);
    for filter in &c.filters {
        let Some(sig) = catalog::signature(entity, filter.keyword) else {
            return Err(AnalyzeError::UnknownFilterForConcept {
                filter: filter.keyword,
                concept: entity,
                span: filter.keyword_span,
            });
        };
        predicates.push(analyze_filter_arg(sig.rule_id, sig.param, filter.keyword, &filter.arg)?);
    }
    Ok(EntitySet { entity, predicates, limit: c.limit.map(|l| l.n) })
}

fn analyze_filter_arg(
    rule_id: &'static str,
    param: ParamKind,
    keyword: FilterKeyword,
    arg: &FilterArg,
) -> Result<Predicate, AnalyzeError> {
    let mismatch = |found: String, span: Span| AnalyzeError::FilterArgMismatch {
        filter: keyword,
        expected: param.describe(),
        found,
        span,
    };
    match (param, arg) {
        (ParamKind::Str, FilterArg::Str(s, _)) => Ok(string_predicate(rule_id, s.clone())),
        (ParamKind::Str, FilterArg::Number(n, span)) => Err(mismatch(format!("number {n}"), *span)),
        (ParamKind::Str, FilterArg::Subquery(_, span)) => Err(mismatch("a subquery".to_string(), *span)),
        (ParamKind::Number, FilterArg::Number(n, _)) => Ok(number_predicate(rule_id, clamp_year(*n))),
        (ParamKind::Number, FilterArg::Str(s, span)) => Err(mismatch(format!("string \"{s}\""), *span)),
        (ParamKind::Number, FilterArg::Subquery(_, span)) => Err(mismatch("a subquery".to_string(), *span)),
        (ParamKind::Subquery(allowed), FilterArg::Subquery(sub, span)) => {
            let sub = analyze_entity_expr(sub, keyword.text(), &param.describe(), *span)?;
            if !allowed.contains(&sub.entity()) {
                return Err(mismatch(sub.entity().keyword_plural().to_string(), *span));
            }
            Ok(subquery_predicate(rule_id, sub))
        }
        (ParamKind::Subquery(allowed), FilterArg::Str(s, span)) => {
            expand_literal_shortcut(rule_id, allowed, keyword, s.clone(), *span)
        }
        (ParamKind::Subquery(_), FilterArg::Number(n, span)) => Err(mismatch(format!("number {n}"), *span)),
    }
}

/// Rewrites a bare string standing for an entity into the concept's identity
/// predicate: persons match on dblp pid, any name, or orcid; publications on
/// dblp key or title; venues on dblp key or acronym. Institutions have no
/// literal form.
fn expand_literal_shortcut(
    rule_id: &'static str,
    allowed: &'static [EntityType],
    keyword: FilterKeyword,
    literal: String,
    span: Span,
) -> Result<Predicate, AnalyzeError> {
    match allowed {
        [EntityType::Person] => {
            let sub = identity_set(EntityType::Person, Predicate::PersonLiteral(literal));
            Ok(subquery_predicate(rule_id, sub))
        }
        [EntityType::Publication] => {
            let sub = identity_set(EntityType::Publication, Predicate::PubLiteral(literal));
            Ok(subquery_predicate(rule_id, sub))
        }
        [EntityType::Conference, EntityType::Journal] => Ok(match rule_id {
            "pub-appeared-in" => Predicate::PubAppearedIn(VenueSelector::Literal(literal)),
            "person-published-in" => Predicate::PersonPublishedIn(VenueSelector::Literal(literal)),
            other => unreachable!("venue rule {other}"),
        }),
        [EntityType::Institution] => {
            Err(AnalyzeError::LiteralNotSupported { filter: keyword, concept: EntityType::Institution, span })
        }
        other => unreachable!("unexpected subquery parameter types {other:?}"),
    }
}

fn identity_set(entity: EntityType, predicate: Predicate) -> EntityExpr {
    EntityExpr::Set(EntitySet { entity, predicates: vec![predicate], limit: None })
}

fn string_predicate(rule_id: &str, s: String) -> Predicate {
    match rule_id {
        "pub-about" => Predicate::PubAbout(s),
        "pub-titled" => Predicate::PubTitled(s),
        "person-named" => Predicate::PersonNamed(s),
        "person-orcid" => Predicate::PersonOrcid(s),
        "conf-acronym" | "journal-acronym" => Predicate::VenueAcronym(s),
        "conf-about" | "journal-about" => Predicate::VenueAbout(s),
        "journal-named" => Predicate::JournalNamed(s),
        "journal-volume" => Predicate::JournalVolume(s),
        "inst-named" => Predicate::InstNamed(s),
        "inst-city" => Predicate::InstCity(s),
        "inst-country" => Predicate::InstCountry(s),
        other => unreachable!("rule {other} does not take a string"),
    }
}

fn number_predicate(rule_id: &str, n: i64) -> Predicate {
    match rule_id {
        "pub-before" => Predicate::PubBefore(n),
        "pub-in-year" => Predicate::PubInYear(n),
        "pub-after" => Predicate::PubAfter(n),
        "conf-before" | "journal-before" => Predicate::VenueBefore(n),
        "conf-in-year" | "journal-in-year" => Predicate::VenueInYear(n),
        "conf-after" | "journal-after" => Predicate::VenueAfter(n),
        other => unreachable!("rule {other} does not take a number"),
    }
}

fn subquery_predicate(rule_id: &str, sub: EntityExpr) -> Predicate {
    match rule_id {
        "pub-published-by" => Predicate::PubPublishedBy(sub),
        "pub-written-by" => Predicate::PubWrittenBy(sub),
        "pub-edited-by" => Predicate::PubEditedBy(sub),
        "pub-appeared-in" => Predicate::PubAppearedIn(VenueSelector::Venues(sub)),
        "pub-references" => Predicate::PubReferences(sub),
        "pub-cited-by" => Predicate::PubCitedBy(sub),
        "person-published-in" => Predicate::PersonPublishedIn(VenueSelector::Venues(sub)),
        "person-published-with" => Predicate::PersonPublishedWith(sub),
        "person-works-for" => Predicate::PersonWorksFor(sub),
        "person-authored" => Predicate::PersonAuthored(sub),
        "person-references" => Predicate::PersonReferences(sub),
        "person-cited-by" => Predicate::PersonCitedBy(sub),
        "inst-members" => Predicate::InstMembers(sub),
        other => unreachable!("rule {other} does not take a subquery"),
    }
}

/// Years live in SQL integers; u64 literals beyond that range saturate.
fn clamp_year(n: u64) -> i64 {
    n.min(i64::MAX as u64) as i64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_text;

    fn typed(src: &str) -> TypedExpr {
        analyze(&parse_text(src).unwrap()).unwrap()
    }

    fn typed_err(src: &str) -> AnalyzeError {
        analyze(&parse_text(src).unwrap()).unwrap_err()
    }

    #[test]
    fn authors_published_in_conference() {
        let t = typed(r#"AUTHORS PUBLISHED IN (CONFERENCE ACRONYM "C");"#);
        let TypedExpr::Entities(EntityExpr::Set(set)) = t else { panic!("expected entity set") };
        assert_eq!(set.entity, EntityType::Person);
        assert_eq!(set.predicates[0], Predicate::PersonHasRole(Role::Author));
        let Predicate::PersonPublishedIn(VenueSelector::Venues(EntityExpr::Set(venue))) = &set.predicates[1] else {
            panic!("expected venue subquery, got {:?}", set.predicates[1]);
        };
        assert_eq!(venue.entity, EntityType::Conference);
        assert_eq!(venue.predicates, vec![Predicate::VenueAcronym("C".into())]);
    }

    #[test]
    fn most_cited_requires_publications() {
        let err = typed_err("MOST CITED (PERSONS);");
        match err {
            AnalyzeError::FunctionArgTypeMismatch { function, found, .. } => {
                assert_eq!(function, "MOST CITED");
                assert_eq!(found, "PERSONS");
            }
            other => panic!("unexpected error: {other:?}"),
        }
        // Specializations of publication are fine.
        let t = typed("MOST CITED (ARTICLES);");
        assert!(matches!(t, TypedExpr::MostCited { .. }));
    }

    #[test]
    fn most_cited_k_defaults_to_five() {
        assert!(matches!(typed("MOST CITED (PUBLICATIONS);"), TypedExpr::MostCited { k: 5, .. }));
        assert!(matches!(typed("MOST CITED (PUBLICATIONS) LIMIT 10;"), TypedExpr::MostCited { k: 10, .. }));
    }

    #[test]
    fn keywords_of_journal_navigation() {
        let t = typed(r#"KEYWORDS OF (JOURNAL OF (PUBLICATIONS TITLED "P"));"#);
        let TypedExpr::KeywordsOf { arg, .. } = t else { panic!("expected KEYWORDS OF") };
        let EntityExpr::VenuesOf { kind, source } = arg else { panic!("expected navigation arg") };
        assert_eq!(kind, VenueKind::Journal);
        assert_eq!(source.entity(), EntityType::Publication);
    }

    #[test]
    fn keywords_of_rejects_persons_and_institutions() {
        for src in ["KEYWORDS OF (PERSONS);", "KEYWORDS OF (INSTITUTIONS);"] {
            assert!(
                matches!(typed_err(src), AnalyzeError::FunctionArgTypeMismatch { .. }),
                "expected type mismatch for {src}"
            );
        }
    }

    #[test]
    fn person_literal_expands_to_identity_predicate() {
        let t = typed(r#"PUBLICATIONS WRITTEN BY "Ralf Schenkel";"#);
        let TypedExpr::Entities(EntityExpr::Set(set)) = t else { panic!() };
        let Predicate::PubWrittenBy(EntityExpr::Set(person)) = &set.predicates[0] else {
            panic!("expected expanded person subquery, got {:?}", set.predicates[0]);
        };
        assert_eq!(person.entity, EntityType::Person);
        assert_eq!(person.predicates, vec![Predicate::PersonLiteral("Ralf Schenkel".into())]);
    }

    #[test]
    fn venue_literal_expands_to_venue_selector() {
        let t = typed(r#"PUBLICATIONS APPEARED IN "icadl";"#);
        let TypedExpr::Entities(EntityExpr::Set(set)) = t else { panic!() };
        assert_eq!(set.predicates, vec![Predicate::PubAppearedIn(VenueSelector::Literal("icadl".into()))]);
    }

    #[test]
    fn institution_literal_rejected() {
        let err = typed_err(r#"PUBLICATIONS PUBLISHED BY "X";"#);
        match err {
            AnalyzeError::LiteralNotSupported { filter, concept, .. } => {
                assert_eq!(filter, FilterKeyword::PublishedBy);
                assert_eq!(concept, EntityType::Institution);
            }
            other => panic!("unexpected error: {other:?}"),
        }
    }

    #[test]
    fn foreign_filter_rejected() {
        let err = typed_err(r#"PUBLICATIONS WORKS FOR "x";"#);
        match err {
            AnalyzeError::UnknownFilterForConcept { filter, concept, .. } => {
                assert_eq!(filter, FilterKeyword::WorksFor);
                assert_eq!(concept, EntityType::Publication);
            }
            other => panic!("unexpected error: {other:?}"),
        }
        // Specializations inherit their base concept's filter set.
        assert!(matches!(typed_err(r#"ARTICLES NAMED "x";"#), AnalyzeError::UnknownFilterForConcept { .. }));
    }

    #[test]
    fn specialization_adds_type_predicate() {
        let TypedExpr::Entities(EntityExpr::Set(articles)) = typed("ARTICLES IN YEAR 2010;") else { panic!() };
        let TypedExpr::Entities(EntityExpr::Set(pubs)) = typed("PUBLICATIONS IN YEAR 2010;") else { panic!() };
        assert_eq!(articles.predicates[0], Predicate::PubTypeIs(PubType::Article));
        assert_eq!(&articles.predicates[1..], &pubs.predicates[..]);
    }

    #[test]
    fn attribute_resolution_is_case_insensitive() {
        let t = typed(r#""DBLPKEY" OF PERSONS;"#);
        let TypedExpr::AttributeOf { attribute, source } = t else { panic!() };
        assert_eq!(attribute, Attribute::DblpKey);
        assert_eq!(source.entity(), EntityType::Person);
    }

    #[test]
    fn unknown_attribute_lists_valid_ones() {
        let err = typed_err(r#""volume" OF PERSONS;"#);
        match err {
            AnalyzeError::UnknownAttribute { attribute, concept, valid, .. } => {
                assert_eq!(attribute, "volume");
                assert_eq!(concept, EntityType::Person);
                assert_eq!(valid, "dblpKey, primaryName, orcid");
            }
            other => panic!("unexpected error: {other:?}"),
        }
        // volume is journal-only among venues.
        assert!(matches!(typed(r#""volume" OF JOURNALS;"#), TypedExpr::AttributeOf { .. }));
        assert!(matches!(typed_err(r#""volume" OF CONFERENCES;"#), AnalyzeError::UnknownAttribute { .. }));
    }

    #[test]
    fn filter_arg_shape_mismatches() {
        assert!(matches!(typed_err(r#"PUBLICATIONS BEFORE "x";"#), AnalyzeError::FilterArgMismatch { .. }));
        assert!(matches!(typed_err("PUBLICATIONS TITLED 2010;"), AnalyzeError::FilterArgMismatch { .. }));
        assert!(matches!(typed_err("PUBLICATIONS WRITTEN BY 5;"), AnalyzeError::FilterArgMismatch { .. }));
        assert!(matches!(typed_err("PUBLICATIONS APPEARED IN (PERSONS);"), AnalyzeError::FilterArgMismatch { .. }));
        assert!(matches!(
            typed_err("PUBLICATIONS WRITTEN BY (COUNT (PERSONS));"),
            AnalyzeError::FunctionArgTypeMismatch { .. }
        ));
    }

    #[test]
    fn count_accepts_any_concept_but_not_functions() {
        for src in ["COUNT (INSTITUTIONS);", "COUNT (EDITORS);", "COUNT (JOURNALS OF (PUBLICATIONS));"] {
            assert!(matches!(typed(src), TypedExpr::Count { .. }), "{src}");
        }
        assert!(matches!(
            typed_err("COUNT (MOST CITED (PUBLICATIONS));"),
            AnalyzeError::FunctionArgTypeMismatch { .. }
        ));
        assert!(matches!(typed_err(r#"COUNT ("title" OF PUBLICATIONS);"#), AnalyzeError::FunctionArgTypeMismatch { .. }));
    }

    #[test]
    fn navigation_requires_publication_source() {
        assert!(matches!(typed_err("CONFERENCE OF (PERSONS);"), AnalyzeError::FunctionArgTypeMismatch { .. }));
        let t = typed("CONFERENCES OF (ARTICLES IN YEAR 2010);");
        let TypedExpr::Entities(e) = t else { panic!() };
        assert_eq!(e.entity(), EntityType::Conference);
    }

    #[test]
    fn output_columns_per_result_shape() {
        assert_eq!(output_columns(&typed("PUBLICATIONS;")), vec!["title"]);
        assert_eq!(output_columns(&typed("AUTHORS;")), vec!["primaryName"]);
        assert_eq!(output_columns(&typed("CONFERENCES;")), vec!["acronym"]);
        assert_eq!(output_columns(&typed("INSTITUTIONS;")), vec!["institution"]);
        assert_eq!(output_columns(&typed("COUNT (PERSONS);")), vec!["count"]);
        assert_eq!(output_columns(&typed("MOST CITED (PUBLICATIONS);")), vec!["title", "citationCount"]);
        assert_eq!(output_columns(&typed("KEYWORDS OF (JOURNALS);")), vec!["keyword"]);
        assert_eq!(output_columns(&typed(r#""year" OF PUBLICATIONS;"#)), vec!["year"]);
    }

    #[test]
    fn filter_arg_type_checked_against_catalog() {
        let t = typed(r#"PERSONS PUBLISHED IN (JOURNALS NAMED "X");"#);
        let TypedExpr::Entities(EntityExpr::Set(set)) = t else { panic!() };
        let Predicate::PersonPublishedIn(VenueSelector::Venues(sub)) = &set.predicates[0] else { panic!() };
        assert_eq!(sub.entity(), EntityType::Journal);
    }
}
