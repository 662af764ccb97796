#pragma once

#include "fkm/crystal.hpp"
#include "fkm/torus_h1.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace fkm {

/// Factors grouped by (per-factor action of G, iso tag); inside one block the
/// factors are interchangeable copies of one curve with one character.
struct IsotypicBlocks {
    std::vector<std::vector<std::size_t>> blocks;

    std::size_t max_block_size() const {
        std::size_t m = 0;
        for (const auto& b : blocks) m = std::max(m, b.size());
        return m;
    }
};

inline IsotypicBlocks isotypic_blocks(const DiagonalAction& act) {
    const auto& T = act.torus();
    const std::size_t nf = T.factors.size();
    const std::size_t q = act.group().order();

    // Character of factor f = the tuple of acting blocks over all of G.
    auto char_of = [&](std::size_t f) {
        std::vector<IntMatrix> c;
        for (std::size_t e = 0; e < q; ++e) c.push_back(act.block(e, f));
        return c;
    };
    std::vector<std::vector<IntMatrix>> chars;
    for (std::size_t f = 0; f < nf; ++f) chars.push_back(char_of(f));

    // Same character on factors declared non-biholomorphic: possible hidden
    // homomorphisms between isogenous curves are not modeled, so reject
    // unless the spec declares the tags non-isogenous.
    if (!T.assume_non_isogenous) {
        for (std::size_t f = 0; f < nf; ++f)
            for (std::size_t g = f + 1; g < nf; ++g)
                if (T.factors[f].iso_tag != T.factors[g].iso_tag &&
                    T.factors[f].rank == T.factors[g].rank && chars[f] == chars[g])
                    throw SemanticError(
                        "factors " + std::to_string(f + 1) + " and " + std::to_string(g + 1) +
                        " carry the same character but different iso tags; declare the torus "
                        "assume_non_isogenous or give the factors one tag");
    }

    std::map<std::pair<std::string, std::size_t>, std::size_t> key_to_block;
    IsotypicBlocks out;
    for (std::size_t f = 0; f < nf; ++f) {
        // Key by tag plus first factor with an identical character.
        std::size_t rep = f;
        for (std::size_t g = 0; g < f; ++g)
            if (T.factors[g].iso_tag == T.factors[f].iso_tag && chars[g] == chars[f]) {
                rep = g;
                break;
            }
        auto key = std::make_pair(T.factors[f].iso_tag, rep);
        auto it = key_to_block.find(key);
        if (it == key_to_block.end()) {
            key_to_block[key] = out.blocks.size();
            out.blocks.push_back({f});
        } else {
            out.blocks[it->second].push_back(f);
        }
    }
    return out;
}

/// A factor permutation normalizing the holonomy, with the automorphism of G
/// it induces by conjugation.
struct FactorPermutation {
    std::vector<std::size_t> sigma;  // factor f goes to position sigma[f]
    std::vector<int> g_aut;          // permutation of group element indices
};

/// The normalizer of G inside the declared automorphisms of T: a product of
/// per-factor unit groups extended by the normalizing factor permutations.
/// Blocks of size two or more make it infinite (they carry a full GL over the
/// factor's endomorphisms).
struct NormalizerModel {
    IsotypicBlocks blocks;
    bool infinite = false;
    std::vector<std::string> infinite_reasons;
    std::vector<FactorPermutation> permutations;
    std::size_t permutation_candidates = 0;
    std::vector<Int> diagonal_orders;
    std::optional<Int> order;          // product of diagonal orders times |permutations|
    bool declared_units_only = false;  // an aut0_infinite factor contributes only its declared units
};

inline IntMatrix factor_permutation_matrix(const TorusSpec& T, const std::vector<std::size_t>& sigma) {
    const std::size_t n = T.total_rank();
    IntMatrix P(n, n);
    for (std::size_t f = 0; f < T.factors.size(); ++f) {
        const std::size_t src = T.factor_offset(f), dst = T.factor_offset(sigma[f]);
        for (std::size_t i = 0; i < T.factors[f].rank; ++i) P(dst + i, src + i) = 1;
    }
    return P;
}

inline NormalizerModel normalizer_model(const DiagonalAction& act) {
    const auto& T = act.torus();
    const auto& G = act.group();
    const std::size_t nf = T.factors.size();
    const std::size_t q = G.order();

    // The diagonal part is the full product of unit groups; that needs every
    // declared unit to commute with the holonomy blocks of its factor.
    for (std::size_t f = 0; f < nf; ++f)
        for (const auto& u : T.factors[f].unit_generators)
            for (std::size_t e = 0; e < q; ++e)
                if (u * act.block(e, f) != act.block(e, f) * u)
                    throw SemanticError("declared units of factor " + std::to_string(f + 1) +
                                        " do not centralize the holonomy blocks (unsupported)");

    NormalizerModel model;
    model.blocks = isotypic_blocks(act);
    for (const auto& b : model.blocks.blocks)
        if (b.size() >= 2) {
            model.infinite = true;
            std::string s = "isotypic block of factors {";
            for (std::size_t i = 0; i < b.size(); ++i) s += (i ? "," : "") + std::to_string(b[i] + 1);
            model.infinite_reasons.push_back(s + "} has size " + std::to_string(b.size()));
        }
    for (std::size_t f = 0; f < nf; ++f) {
        if (!T.factors[f].aut0_infinite) continue;
        bool scalar = true;
        for (std::size_t e = 0; e < q && scalar; ++e) {
            const IntMatrix& blk = act.block(e, f);
            scalar = blk.is_identity() || (-blk).is_identity();
        }
        if (!scalar)
            throw SemanticError("factor " + std::to_string(f + 1) +
                                " has infinite declared automorphisms but non-scalar holonomy blocks; "
                                "finiteness cannot be certified (unsupported)");
        model.infinite = true;
        model.declared_units_only = true;
        model.infinite_reasons.push_back("factor " + std::to_string(f + 1) +
                                         " has an infinite automorphism group acting through scalars");
    }

    // Exhaustive factor-permutation test: every tag/rank compatible sigma is
    // checked by exact set equality of the conjugated holonomy.
    std::map<IntMatrix, std::size_t> rho_index;
    for (std::size_t e = 0; e < q; ++e) rho_index[act.rho(e)] = e;
    std::vector<std::size_t> perm(nf);
    for (std::size_t i = 0; i < nf; ++i) perm[i] = i;
    do {
        bool compatible = true;
        for (std::size_t f = 0; f < nf && compatible; ++f)
            compatible = T.factors[f].iso_tag == T.factors[perm[f]].iso_tag &&
                         T.factors[f].rank == T.factors[perm[f]].rank;
        if (!compatible) continue;
        ++model.permutation_candidates;
        IntMatrix P = factor_permutation_matrix(T, perm);
        IntMatrix Pt = P.transpose();
        std::vector<int> g_aut(q, -1);
        bool ok = true;
        for (std::size_t e = 0; e < q && ok; ++e) {
            auto it = rho_index.find(P * act.rho(e) * Pt);
            if (it == rho_index.end())
                ok = false;
            else
                g_aut[e] = static_cast<int>(it->second);
        }
        if (ok) model.permutations.push_back({perm, std::move(g_aut)});
    } while (std::next_permutation(perm.begin(), perm.end()));

    for (std::size_t f = 0; f < nf; ++f) model.diagonal_orders.push_back(int_from_size(T.factors[f].units.order()));
    if (!model.infinite) {
        Int o = int_from_size(model.permutations.size());
        for (const auto& d : model.diagonal_orders) o *= d;
        model.order = o;
    }
    return model;
}

/// One element of the normalizer's image on T[N]: the matrix mod N, the
/// induced automorphism of G, and the induced action on H^1 class labels.
struct NormalizerActor {
    IntMatrix mat;
    std::vector<int> g_aut;
    IntMatrix label_mat;
};

struct TorsionImage {
    std::vector<NormalizerActor> actors;  // closed under composition; [0] = identity
    Int kernel_order = 1;                 // |model| / |actors| (finite model)
    std::optional<Int> model_order;
};

namespace detail {

inline std::vector<int> inverse_permutation(const std::vector<int>& p) {
    std::vector<int> inv(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) inv[p[i]] = static_cast<int>(i);
    return inv;
}

// n * z with n given mod N: (n*z)(g) = mat . z(phi^{-1}(g)).
inline TranslationCocycle star_apply(const NormalizerActor& a, const TranslationCocycle& z,
                                     const Int& N) {
    auto inv = inverse_permutation(a.g_aut);
    TranslationCocycle out;
    out.modulus = N;
    out.table.resize(z.table.size());
    for (std::size_t g = 0; g < z.table.size(); ++g)
        out.table[g] = vec_mod(a.mat * z.table[inv[g]], N);
    return out;
}

}  // namespace detail

/// The (finite) image of the normalizer in Aut(T[N]) together with the label
/// action on H^1(G,T).  Throws ClosureExceedsBound past `bound` elements.
inline TorsionImage torsion_image(const DiagonalAction& act, const NormalizerModel& model,
                                  const TorusCohomology& h1, std::size_t bound = 10000) {
    const auto& T = act.torus();
    const Int N = h1.torsion_modulus();
    const std::size_t n = act.rank(), q = act.group().order();
    const std::size_t t = h1.summand_orders().size();

    std::vector<std::pair<IntMatrix, std::vector<int>>> gens;
    std::vector<int> id_perm(q);
    for (std::size_t e = 0; e < q; ++e) id_perm[e] = static_cast<int>(e);

    for (std::size_t f = 0; f < T.factors.size(); ++f)
        for (const auto& u : T.factors[f].unit_generators) {
            std::vector<IntMatrix> blocks;
            for (std::size_t k = 0; k < T.factors.size(); ++k)
                blocks.push_back(k == f ? u : IntMatrix::identity(T.factors[k].rank));
            gens.emplace_back(IntMatrix::block_diagonal(blocks).mod_reduced(N), id_perm);
        }
    for (const auto& p : model.permutations)
        gens.emplace_back(factor_permutation_matrix(T, p.sigma).mod_reduced(N), p.g_aut);

    // Blocks of size >= 2: transvections over the factor's endomorphisms.
    for (const auto& b : model.blocks.blocks) {
        if (b.size() < 2) continue;
        const TorusFactor& fac = T.factors[b[0]];
        std::vector<IntMatrix> betas{IntMatrix::identity(fac.rank)};
        switch (fac.preset) {
            case TorusFactor::Preset::Eisenstein: betas.push_back(eisenstein_rotation()); break;
            case TorusFactor::Preset::Gauss: betas.push_back(gauss_rotation()); break;
            case TorusFactor::Preset::Generic: break;
            case TorusFactor::Preset::Custom:
                for (const auto& u : fac.unit_generators) betas.push_back(u);
                break;
        }
        for (std::size_t p = 0; p < b.size(); ++p)
            for (std::size_t r = 0; r < b.size(); ++r) {
                if (p == r) continue;
                for (const auto& beta : betas) {
                    IntMatrix E = IntMatrix::identity(n);
                    const std::size_t ro = T.factor_offset(b[p]), co = T.factor_offset(b[r]);
                    for (std::size_t i = 0; i < fac.rank; ++i)
                        for (std::size_t j = 0; j < fac.rank; ++j) E(ro + i, co + j) = beta(i, j);
                    gens.emplace_back(E.mod_reduced(N), id_perm);
                }
            }
    }

    // Label action of a generator: push each summand representative through.
    auto label_matrix = [&](const IntMatrix& mat, const std::vector<int>& g_aut) {
        IntMatrix L(t, t);
        NormalizerActor tmp{mat, g_aut, IntMatrix()};
        for (std::size_t j = 0; j < t; ++j) {
            IntVector e(t, Int(0));
            e[j] = 1;
            TranslationCocycle img = detail::star_apply(tmp, h1.class_table(e), N);
            IntVector lab = h1.reduce(img);  // throws if the image is not a cocycle
            for (std::size_t i = 0; i < t; ++i) L(i, j) = lab[i];
        }
        return L;
    };

    TorsionImage out;
    out.model_order = model.order;
    std::map<std::pair<std::vector<Int>, std::vector<int>>, std::size_t> seen;
    IntMatrix id_mat = IntMatrix::identity(n).mod_reduced(N);
    out.actors.push_back({id_mat, id_perm, IntMatrix::identity(t)});
    seen[{id_mat.flat(), id_perm}] = 0;

    std::vector<NormalizerActor> gen_actors;
    for (auto& [mat, g_aut] : gens) gen_actors.push_back({mat, g_aut, label_matrix(mat, g_aut)});

    std::vector<std::size_t> todo{0};
    while (!todo.empty()) {
        std::size_t cur = todo.back();
        todo.pop_back();
        for (const auto& g : gen_actors) {
            IntMatrix m = (g.mat * out.actors[cur].mat).mod_reduced(N);
            std::vector<int> p(q);
            for (std::size_t e = 0; e < q; ++e) p[e] = g.g_aut[out.actors[cur].g_aut[e]];
            auto key = std::make_pair(m.flat(), p);
            if (seen.count(key)) continue;
            if (out.actors.size() >= bound)
                throw ClosureExceedsBound("normalizer torsion image exceeds bound " + std::to_string(bound));
            IntMatrix L = g.label_mat * out.actors[cur].label_mat;
            seen[key] = out.actors.size();
            out.actors.push_back({std::move(m), std::move(p), std::move(L)});
            todo.push_back(out.actors.size() - 1);
        }
    }

    if (model.order) {
        if (*model.order % int_from_size(out.actors.size()) != 0)
            throw CrossCheckError("torsion image size does not divide the normalizer order");
        out.kernel_order = *model.order / int_from_size(out.actors.size());
    }
    return out;
}

/// Labels of the special (fixed-point free) classes, in label order.
struct SpecialClasses {
    std::vector<IntVector> labels;
    std::set<IntVector> label_set;
    Int total_classes = 0;
};

inline SpecialClasses special_classes(const TorusCohomology& h1, const DiagonalAction& act,
                                      std::size_t bound = 1u << 20) {
    SpecialClasses out;
    out.total_classes = h1.class_count();
    for (const auto& label : h1.all_labels(bound)) {
        TranslationCocycle z = h1.class_table(label);
        if (is_free_action(act, z)) {
            out.labels.push_back(label);
            out.label_set.insert(label);
        }
    }
    return out;
}

struct OrbitData {
    IntVector representative_label;
    TranslationCocycle representative;
    std::size_t size = 0;
    Int stabilizer_image_order = 1;        // stabilizer inside the torsion image
    std::optional<Int> n_alpha;            // stabilizer in the normalizer (finite model)
    std::vector<IntVector> member_labels;  // sorted
};

struct ClassificationReport {
    AbelianStructure h1_structure;
    Int h1_order = 1;
    Int special_class_count = 0;
    std::size_t orbit_count = 0;  // m
    std::vector<OrbitData> orbits;
    Int image_order = 1;
};

/// Star-action orbits of the torsion image on the special classes.  Enforces
/// the orbit-stabilizer identity, that orbit sizes sum to the class count,
/// and that every applied actor maps special classes to special classes.
inline ClassificationReport classify_orbits(const TorusCohomology& h1, const SpecialClasses& special,
                                            const TorsionImage& image) {
    const auto& orders = h1.summand_orders();
    const std::size_t t = orders.size();
    auto apply_label = [&](const NormalizerActor& a, const IntVector& l) {
        IntVector out(t, Int(0));
        for (std::size_t i = 0; i < t; ++i) {
            Int acc = 0;
            for (std::size_t j = 0; j < t; ++j) acc += a.label_mat(i, j) * l[j];
            out[i] = mod_floor(acc, orders[i]);
        }
        return out;
    };

    ClassificationReport rep;
    rep.h1_structure = h1.structure();
    rep.h1_order = h1.class_count();
    rep.special_class_count = int_from_size(special.labels.size());
    rep.image_order = int_from_size(image.actors.size());

    std::set<IntVector> done;
    std::size_t covered = 0;
    for (const auto& start : special.labels) {
        if (done.count(start)) continue;
        std::set<IntVector> orbit;
        Int stab = 0;
        for (const auto& a : image.actors) {
            IntVector img = apply_label(a, start);
            if (!special.label_set.count(img))
                throw CrossCheckError("star action image of a special class is not special");
            if (img == start) ++stab;
            orbit.insert(std::move(img));
        }
        if (int_from_size(orbit.size()) * stab != rep.image_order)
            throw CrossCheckError("orbit-stabilizer identity violated");
        OrbitData od;
        od.size = orbit.size();
        od.stabilizer_image_order = stab;
        if (image.model_order) od.n_alpha = image.kernel_order * stab;
        od.member_labels.assign(orbit.begin(), orbit.end());
        // Representative: lexicographically minimal canonical table.
        bool first = true;
        for (const auto& l : orbit) {
            TranslationCocycle tab = h1.class_table(l);
            if (first || tab < od.representative) {
                od.representative = std::move(tab);
                od.representative_label = l;
                first = false;
            }
            done.insert(l);
        }
        covered += orbit.size();
        rep.orbits.push_back(std::move(od));
    }
    if (covered != special.labels.size()) throw CrossCheckError("orbit sizes do not sum to the class count");
    std::sort(rep.orbits.begin(), rep.orbits.end(),
              [](const OrbitData& a, const OrbitData& b) { return a.representative < b.representative; });
    rep.orbit_count = rep.orbits.size();
    return rep;
}

/// Per-manifold automorphism data: the extension 0 -> T^G -> Aut(M) -> N_alpha/G -> 1
/// gives |Aut(M)| = |T^G| * |N_alpha/G| in the finite case.
struct AutReport {
    std::size_t betti1 = 0;
    AbelianStructure tg_structure;
    Int tg_order = 1;
    bool finite = false;
    std::string infinite_reason;
    IntVector class_label;
    std::optional<Int> stabilizer_image_order;
    std::optional<Int> n_alpha;
    std::optional<Int> n_alpha_over_g;
    std::optional<Int> aut_order;
};

inline AutReport automorphism_report(const DiagonalAction& act, const TranslationCocycle& z,
                                     const NormalizerModel& model, const TorusCohomology& h1,
                                     const TorsionImage* image) {
    if (auto bad = first_fixed_element(act, z))
        throw NotFreeError(act.element_name(*bad),
                           "action is not free: element " + act.element_name(*bad) + " has a fixed point");
    AutReport rep;
    FixedPointData fp = fixed_point_group(act);
    rep.betti1 = fp.betti1;
    rep.tg_structure = fp.structure;
    rep.tg_order = fp.torsion_order;
    rep.class_label = h1.class_of(z);

    if (fp.betti1 > 0) {
        rep.finite = false;
        rep.infinite_reason = "positive first Betti number (" + std::to_string(fp.betti1) + ")";
        return rep;
    }
    if (model.infinite) {
        rep.finite = false;
        rep.infinite_reason = "normalizer is infinite: " +
                              (model.infinite_reasons.empty() ? std::string("unknown") : model.infinite_reasons[0]);
        return rep;
    }
    if (!image) throw SemanticError("automorphism_report: torsion image required for the finite case");

    const auto& orders = h1.summand_orders();
    Int stab = 0;
    for (const auto& a : image->actors) {
        IntVector img(orders.size(), Int(0));
        for (std::size_t i = 0; i < orders.size(); ++i) {
            Int acc = 0;
            for (std::size_t j = 0; j < orders.size(); ++j) acc += a.label_mat(i, j) * rep.class_label[j];
            img[i] = mod_floor(acc, orders[i]);
        }
        if (img == rep.class_label) ++stab;
    }
    rep.finite = true;
    rep.stabilizer_image_order = stab;
    rep.n_alpha = image->kernel_order * stab;
    const Int g_order = int_from_size(act.group().order());
    if (*rep.n_alpha % g_order != 0)
        throw CrossCheckError("|N_alpha| is not divisible by |G|");
    rep.n_alpha_over_g = *rep.n_alpha / g_order;
    rep.aut_order = rep.tg_order * *rep.n_alpha_over_g;
    return rep;
}

}  // namespace fkm
