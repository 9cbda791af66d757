#include "circlelab/pet.hpp"

#include <stdexcept>

namespace circlelab::poly {

int PolyVector::degree_y() const
{
    int d = -1;
    for (const auto& c : comps)
        d = std::max(d, c.degree_y());
    return d;
}

PolyVectorFamily PolyVectorFamily::from_map(const PolynomialMap& pm)
{
    PolyVectorFamily fam;
    fam.k = pm.k();
    for (std::size_t i = 0; i < pm.k(); ++i) {
        PolyVector v;
        v.comps.resize(pm.k());
        v.comps[i] = MultiPoly::from_univariate(pm[i]);
        fam.vectors.push_back(std::move(v));
    }
    return fam;
}

int PolyVectorFamily::max_degree_y() const
{
    int d = -1;
    for (const auto& v : vectors)
        d = std::max(d, v.degree_y());
    return d;
}

std::vector<std::vector<std::string>> PolyVectorFamily::strings() const
{
    std::vector<std::vector<std::string>> out;
    for (const auto& v : vectors) {
        std::vector<std::string> row;
        for (const auto& c : v.comps)
            row.push_back(c.str());
        out.push_back(std::move(row));
    }
    return out;
}

PolyVectorFamily vdc_step(const PolyVectorFamily& fam, std::size_t l0, const Shift& h)
{
    if (fam.vectors.empty())
        throw std::invalid_argument("vdc_step: empty family");
    if (l0 >= fam.vectors.size())
        throw std::out_of_range("vdc_step: l0 out of range");

    PolyVectorFamily out;
    out.k = fam.k;
    out.history = fam.history;
    out.shift_vars = fam.shift_vars;

    MultiPoly shift;
    PetStep step;
    step.l0 = l0;
    if (h) {
        shift = MultiPoly::constant(*h);
        step.shift_var = h->str();
    } else {
        out.shift_vars += 1;
        shift = MultiPoly::variable(out.shift_vars);
        step.shift_var = "h" + std::to_string(out.shift_vars);
    }
    out.history.push_back(step);

    const PolyVector& base = fam.vectors[l0];
    auto push = [&](PolyVector v) {
        if (!v.is_constant())
            out.vectors.push_back(std::move(v));
    };
    for (std::size_t l = 0; l < fam.vectors.size(); ++l) {
        if (l == l0)
            continue;
        PolyVector v;
        v.conjugated = fam.vectors[l].conjugated;
        for (std::size_t i = 0; i < fam.k; ++i)
            v.comps.push_back(fam.vectors[l].comps[i] - base.comps[i]);
        push(std::move(v));
    }
    for (std::size_t l = 0; l < fam.vectors.size(); ++l) {
        PolyVector v;
        v.conjugated = !fam.vectors[l].conjugated;
        for (std::size_t i = 0; i < fam.k; ++i)
            v.comps.push_back(fam.vectors[l].comps[i].shift_y(shift) - base.comps[i]);
        push(std::move(v));
    }
    return out;
}

std::size_t select_l0(const PolyVectorFamily& fam)
{
    std::size_t best = 0;
    for (std::size_t l = 1; l < fam.vectors.size(); ++l)
        if (fam.vectors[l].degree_y() < fam.vectors[best].degree_y())
            best = l;
    return best;
}

PetTrace pet_trace(const PolyVectorFamily& fam, std::optional<std::uint64_t> step_cap, std::size_t family_cap)
{
    std::uint64_t cap = 0;
    if (step_cap) {
        cap = *step_cap;
    } else {
        const std::uint64_t exponent = static_cast<std::uint64_t>(std::max(fam.max_degree_y(), 0)) * fam.k *
                                       fam.vectors.size();
        cap = exponent >= 31 ? (std::uint64_t{1} << 62) : (std::uint64_t{1} << (2 * exponent));
    }
    PetTrace trace;
    trace.states.push_back(fam);
    while (!trace.states.back().vectors.empty() && !trace.states.back().is_linear()) {
        const auto& cur = trace.states.back();
        const bool over_steps = trace.steps() >= cap;
        if (over_steps || cur.vectors.size() > family_cap) {
            PetCapExceeded e(over_steps ? "pet_trace: step cap exceeded"
                                        : "pet_trace: family size cap exceeded (" + std::to_string(cur.vectors.size()) +
                                              " vectors after " + std::to_string(trace.steps()) + " steps)");
            e.steps = trace.steps();
            e.family_size = cur.vectors.size();
            throw e;
        }
        trace.states.push_back(vdc_step(cur, select_l0(cur), std::nullopt));
    }
    return trace;
}

nlohmann::json trace_to_json(const PetTrace& trace)
{
    nlohmann::json steps = nlohmann::json::array();
    for (std::size_t s = 1; s < trace.states.size(); ++s) {
        const auto& st = trace.states[s];
        const auto& h = st.history.back();
        steps.push_back({{"l0", h.l0}, {"shift_var", h.shift_var}, {"family", st.strings()}});
    }
    return {{"initial", trace.states.front().strings()},
            {"steps", steps},
            {"step_count", trace.steps()},
            {"shift_vars", trace.shift_vars()}};
}

}  // namespace circlelab::poly
