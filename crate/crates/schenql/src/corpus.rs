//! Random generation of well-typed queries for differential testing. The
//! generator draws filter values from a dataset so queries regularly hit
//! real rows, mixes in junk values, and builds every node from the filter
//! catalog so the result always type-checks.

use crate::analyze::TypedExpr;
use crate::ast::{
    AttributeQuery, Concept, ConceptQuery, Expr, Filter, FilterArg, FunctionCall, FunctionName, Limit, Navigation,
};
use crate::catalog::{self, EntityType, FilterKeyword, ParamKind};
use crate::model::{FixtureDataset, VenueKind};
use crate::table::ResultTable;
use crate::token::Span;
use rand::seq::SliceRandom;
use rand::Rng;

/// Filter values harvested from a dataset.
#[derive(Debug, Clone)]
pub struct ValuePools {
    pub person_names: Vec<String>,
    pub orcids: Vec<String>,
    pub titles: Vec<String>,
    pub acronyms: Vec<String>,
    pub venue_dblp_keys: Vec<String>,
    pub venue_names: Vec<String>,
    pub keywords: Vec<String>,
    pub institution_names: Vec<String>,
    pub cities: Vec<String>,
    pub countries: Vec<String>,
    pub volumes: Vec<String>,
    pub years: Vec<i64>,
}

impl ValuePools {
    pub fn from_dataset(d: &FixtureDataset) -> ValuePools {
        let mut years: Vec<i64> = d.publications.iter().filter_map(|p| p.year).collect();
        years.sort_unstable();
        years.dedup();
        ValuePools {
            person_names: d.persons.iter().flat_map(|p| p.names.iter().cloned()).collect(),
            orcids: d.persons.iter().filter_map(|p| p.orcid.clone()).collect(),
            titles: d.publications.iter().map(|p| p.title.clone()).collect(),
            acronyms: d.venues.iter().map(|v| v.acronym.clone()).collect(),
            venue_dblp_keys: d.venues.iter().filter_map(|v| v.dblp_key.clone()).collect(),
            venue_names: d.venues.iter().map(|v| v.name.clone()).collect(),
            keywords: d.keywords.iter().map(|k| k.keyword.clone()).collect(),
            institution_names: d.institutions.iter().map(|i| i.name.clone()).collect(),
            cities: d.institutions.iter().map(|i| i.city.clone()).collect(),
            countries: d.institutions.iter().map(|i| i.country.clone()).collect(),
            volumes: d.publications.iter().filter_map(|p| p.volume.clone()).collect(),
            years,
        }
    }
}

/// Random query builder over one set of value pools.
pub struct QueryGen<'a> {
    pools: &'a ValuePools,
}

const JUNK_STRINGS: &[&str] = &[
    "no such value",
    "zzz",
    "Hello \"World\"",
    "back\\slash",
    "",
    "Crossing the Streams",
    "0000-0000-0000-0000",
];

impl<'a> QueryGen<'a> {
    pub fn new(pools: &'a ValuePools) -> QueryGen<'a> {
        QueryGen { pools }
    }

    /// One random top-level query with subquery nesting at most `depth`.
    pub fn expr(&self, rng: &mut impl Rng, depth: usize) -> Expr {
        match rng.gen_range(0..100) {
            0..=54 => {
                let entity = *EntityType::ALL.choose(rng).unwrap();
                self.concept_query(rng, entity, depth)
            }
            55..=74 => self.function(rng, depth),
            75..=89 => self.attribute(rng, depth),
            _ => self.navigation(rng, depth),
        }
    }

    fn function(&self, rng: &mut impl Rng, depth: usize) -> Expr {
        let (function, arg) = match rng.gen_range(0..3) {
            0 => (FunctionName::Count, self.entity_expr(rng, &EntityType::ALL, depth)),
            1 => (FunctionName::MostCited, self.entity_expr(rng, &[EntityType::Publication], depth)),
            _ => (
                FunctionName::KeywordsOf,
                self.entity_expr(
                    rng,
                    &[EntityType::Publication, EntityType::Conference, EntityType::Journal],
                    depth,
                ),
            ),
        };
        Expr::Function(FunctionCall {
            function,
            name_span: Span::default(),
            arg: Box::new(arg),
            arg_span: Span::default(),
            limit: self.maybe_limit(rng, 25),
        })
    }

    fn attribute(&self, rng: &mut impl Rng, depth: usize) -> Expr {
        let source = self.entity_expr(rng, &EntityType::ALL, depth);
        let entity = source_entity(&source);
        let attribute = entity.attributes().choose(rng).unwrap().to_string();
        // Attribute names resolve case-insensitively; exercise that too.
        let attribute = match rng.gen_range(0..4) {
            0 => attribute.to_uppercase(),
            1 => attribute.to_lowercase(),
            _ => attribute,
        };
        Expr::Attribute(AttributeQuery {
            attribute,
            attribute_span: Span::default(),
            source: Box::new(source),
        })
    }

    fn navigation(&self, rng: &mut impl Rng, depth: usize) -> Expr {
        let target = if rng.gen_bool(0.5) { VenueKind::Conference } else { VenueKind::Journal };
        Expr::Navigation(Navigation {
            target,
            plural: rng.gen_bool(0.5),
            target_span: Span::default(),
            source: Box::new(self.entity_expr(rng, &[EntityType::Publication], depth)),
            source_span: Span::default(),
        })
    }

    /// An entity-typed expression whose type is drawn from `allowed`.
    pub fn entity_expr(&self, rng: &mut impl Rng, allowed: &[EntityType], depth: usize) -> Expr {
        let entity = allowed.choose(rng).copied().unwrap();
        let venue_target = matches!(entity, EntityType::Conference | EntityType::Journal);
        if venue_target && depth > 0 && rng.gen_range(0..100) < 15 {
            let target = if entity == EntityType::Conference { VenueKind::Conference } else { VenueKind::Journal };
            return Expr::Navigation(Navigation {
                target,
                plural: rng.gen_bool(0.5),
                target_span: Span::default(),
                source: Box::new(self.entity_expr(rng, &[EntityType::Publication], depth - 1)),
                source_span: Span::default(),
            });
        }
        self.concept_query(rng, entity, depth)
    }

    fn concept_query(&self, rng: &mut impl Rng, entity: EntityType, depth: usize) -> Expr {
        let concept = pick_concept(rng, entity);
        let filter_count = match rng.gen_range(0..100) {
            0..=24 => 0,
            25..=64 => 1,
            65..=89 => 2,
            _ => 3,
        };
        let signatures: Vec<_> = catalog::signatures_for(entity).collect();
        let mut filters = Vec::with_capacity(filter_count);
        for _ in 0..filter_count {
            let sig = signatures.choose(rng).unwrap();
            if let Some(filter) = self.filter(rng, entity, sig.keyword, sig.param, depth) {
                filters.push(filter);
            }
        }
        Expr::Concept(ConceptQuery {
            concept,
            plural: rng.gen_bool(0.6),
            concept_span: Span::default(),
            filters,
            limit: self.maybe_limit(rng, 20),
        })
    }

    fn filter(
        &self,
        rng: &mut impl Rng,
        host: EntityType,
        keyword: FilterKeyword,
        param: ParamKind,
        depth: usize,
    ) -> Option<Filter> {
        let arg = match param {
            ParamKind::Str => FilterArg::Str(self.string_value(rng, host, keyword), Span::default()),
            ParamKind::Number => FilterArg::Number(self.year_value(rng), Span::default()),
            ParamKind::Subquery(allowed) => {
                let literal_ok = allowed != [EntityType::Institution];
                if literal_ok && (depth == 0 || rng.gen_range(0..100) < 30) {
                    FilterArg::Str(self.literal_value(rng, allowed), Span::default())
                } else if depth == 0 {
                    // No literal form and no depth budget left: drop the
                    // filter rather than breaking the nesting bound.
                    return None;
                } else {
                    let sub = self.entity_expr(rng, allowed, depth - 1);
                    FilterArg::Subquery(Box::new(sub), Span::default())
                }
            }
        };
        Some(Filter { keyword, keyword_span: Span::default(), arg })
    }

    fn maybe_limit(&self, rng: &mut impl Rng, percent: u32) -> Option<Limit> {
        (rng.gen_range(0..100) < percent).then(|| Limit { n: rng.gen_range(0..=30), span: Span::default() })
    }

    fn string_value(&self, rng: &mut impl Rng, host: EntityType, keyword: FilterKeyword) -> String {
        let pool: &[String] = match keyword {
            FilterKeyword::About => &self.pools.keywords,
            FilterKeyword::Titled => &self.pools.titles,
            FilterKeyword::Orcid => &self.pools.orcids,
            FilterKeyword::Acronym => &self.pools.acronyms,
            FilterKeyword::Volume => &self.pools.volumes,
            FilterKeyword::City => &self.pools.cities,
            FilterKeyword::Country => &self.pools.countries,
            FilterKeyword::Named => match host {
                EntityType::Person => &self.pools.person_names,
                EntityType::Journal => &self.pools.venue_names,
                _ => &self.pools.institution_names,
            },
            _ => &[],
        };
        self.pick_string(rng, pool)
    }

    /// Identity literal for a literal-shortcut expansion.
    fn literal_value(&self, rng: &mut impl Rng, allowed: &[EntityType]) -> String {
        let pool: &[String] = match allowed {
            [EntityType::Person] => {
                if rng.gen_bool(0.5) {
                    &self.pools.person_names
                } else {
                    &self.pools.orcids
                }
            }
            [EntityType::Publication] => &self.pools.titles,
            _ => {
                if rng.gen_bool(0.5) {
                    &self.pools.acronyms
                } else {
                    &self.pools.venue_dblp_keys
                }
            }
        };
        self.pick_string(rng, pool)
    }

    fn pick_string(&self, rng: &mut impl Rng, pool: &[String]) -> String {
        if pool.is_empty() || rng.gen_range(0..100) < 20 {
            JUNK_STRINGS.choose(rng).unwrap().to_string()
        } else {
            pool.choose(rng).unwrap().clone()
        }
    }

    fn year_value(&self, rng: &mut impl Rng) -> u64 {
        if !self.pools.years.is_empty() && rng.gen_bool(0.7) {
            *self.pools.years.choose(rng).unwrap() as u64
        } else {
            rng.gen_range(1800..2040)
        }
    }
}

fn pick_concept(rng: &mut impl Rng, entity: EntityType) -> Concept {
    match entity {
        EntityType::Publication => *[
            Concept::Publication,
            Concept::Publication,
            Concept::Publication,
            Concept::Article,
            Concept::Book,
            Concept::Chapter,
            Concept::Masterthesis,
            Concept::Phdthesis,
        ]
        .choose(rng)
        .unwrap(),
        EntityType::Person => *[Concept::Person, Concept::Person, Concept::Person, Concept::Author, Concept::Editor]
            .choose(rng)
            .unwrap(),
        EntityType::Conference => Concept::Conference,
        EntityType::Journal => Concept::Journal,
        EntityType::Institution => Concept::Institution,
    }
}

/// Base entity type of a generated entity expression, for attribute picks.
fn source_entity(e: &Expr) -> EntityType {
    match e {
        Expr::Concept(c) => match c.concept {
            Concept::Publication
            | Concept::Article
            | Concept::Book
            | Concept::Chapter
            | Concept::Masterthesis
            | Concept::Phdthesis => EntityType::Publication,
            Concept::Person | Concept::Author | Concept::Editor => EntityType::Person,
            Concept::Conference => EntityType::Conference,
            Concept::Journal => EntityType::Journal,
            Concept::Institution => EntityType::Institution,
        },
        Expr::Navigation(n) => match n.target {
            VenueKind::Conference => EntityType::Conference,
            VenueKind::Journal => EntityType::Journal,
        },
        Expr::Function(_) | Expr::Attribute(_) => unreachable!("not an entity expression"),
    }
}

/// Compares the SQL route's result with the reference result for one typed
/// query: MOST CITED output is order-sensitive, everything else compares as
/// a row set. Returns a description of the first mismatch.
pub fn tables_agree(typed: &TypedExpr, sql: &ResultTable, reference: &ResultTable) -> Result<(), String> {
    if sql.column_names != reference.column_names {
        return Err(format!(
            "column names differ: sql {:?} vs reference {:?}",
            sql.column_names, reference.column_names
        ));
    }
    let (a, b) = if matches!(typed, TypedExpr::MostCited { .. }) {
        (sql.rows.clone(), reference.rows.clone())
    } else {
        (sql.canonical_rows(), reference.canonical_rows())
    };
    if a != b {
        return Err(format!(
            "rows differ: sql returned {} rows, reference {} rows\n  sql: {:?}\n  ref: {:?}",
            a.len(),
            b.len(),
            &a[..a.len().min(5)],
            &b[..b.len().min(5)]
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn generated_queries_type_check_and_round_trip() {
        let out = synth::generate(synth::SynthConfig::default(), 9);
        let pools = ValuePools::from_dataset(&out.dataset);
        let gen = QueryGen::new(&pools);
        let mut rng = StdRng::seed_from_u64(1);
        for i in 0..300 {
            let expr = gen.expr(&mut rng, 3);
            let text = expr.to_query_text();
            let reparsed = crate::parse_text(&text).unwrap_or_else(|e| panic!("case {i}: {text}\n{e}"));
            assert_eq!(reparsed.without_spans(), expr.without_spans(), "round trip for {text}");
            crate::analyze::analyze(&expr).unwrap_or_else(|e| panic!("case {i} failed to type-check: {text}\n{e}"));
        }
    }

    #[test]
    fn generation_is_deterministic_per_seed() {
        let out = synth::generate(synth::SynthConfig::default(), 9);
        let pools = ValuePools::from_dataset(&out.dataset);
        let gen = QueryGen::new(&pools);
        let queries = |seed: u64| {
            let mut rng = StdRng::seed_from_u64(seed);
            (0..50).map(|_| gen.expr(&mut rng, 3).to_query_text()).collect::<Vec<_>>()
        };
        assert_eq!(queries(7), queries(7));
        assert_ne!(queries(7), queries(8));
    }

    #[test]
    fn random_queries_agree_between_sql_and_oracle() {
        let out = synth::generate(synth::SynthConfig::default(), 9);
        let pools = ValuePools::from_dataset(&out.dataset);
        let gen = QueryGen::new(&pools);
        let mut db = crate::db::Db::open_in_memory().unwrap();
        db.load_dataset(&out.dataset).unwrap();
        let oracle = crate::oracle::Oracle::new(&out.dataset);
        let mut rng = StdRng::seed_from_u64(11);
        for i in 0..250 {
            let expr = gen.expr(&mut rng, 3);
            let text = expr.to_query_text();
            let typed = crate::analyze::analyze(&expr).unwrap();
            let sql = crate::codegen::compile(&typed);
            let via_sql = db.execute(&sql).unwrap_or_else(|e| panic!("case {i}: {text}\n{e}"));
            let via_oracle = oracle.eval(&typed);
            tables_agree(&typed, &via_sql, &via_oracle)
                .unwrap_or_else(|e| panic!("case {i} disagrees: {text}\n{e}\nsql text: {}", sql.text));
        }
    }

    #[test]
    fn pools_cover_every_string_filter() {
        let out = synth::generate(synth::SynthConfig::default(), 9);
        let pools = ValuePools::from_dataset(&out.dataset);
        assert!(!pools.person_names.is_empty());
        assert!(!pools.orcids.is_empty());
        assert!(!pools.titles.is_empty());
        assert!(!pools.acronyms.is_empty());
        assert!(!pools.venue_dblp_keys.is_empty());
        assert!(!pools.venue_names.is_empty());
        assert!(!pools.keywords.is_empty());
        assert!(!pools.institution_names.is_empty());
        assert!(!pools.cities.is_empty());
        assert!(!pools.countries.is_empty());
        assert!(!pools.volumes.is_empty());
        assert!(!pools.years.is_empty());
    }
}
