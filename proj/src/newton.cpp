#include "valuniform/newton.hpp"

namespace valuniform {

QPoly make_qpoly(const std::vector<Rat>& coeffs, const Int& prime) {
    PAdicRational proto(Rat(0), prime);
    std::vector<PAdicRational> c;
    for (const auto& q : coeffs) c.push_back(proto.zero() + PAdicRational(q, prime));
    return QPoly(std::move(c), proto);
}

std::map<Rat, long> NewtonPolygon::root_valuations() const {
    std::map<Rat, long> out;
    for (const auto& s : segments) out[-s.slope] += s.length;
    return out;
}

NewtonPolygon newton_polygon_from_valuations(const std::vector<Valuation>& vals,
                                             std::optional<Rat> certified_precision) {
    NewtonPolygon np;
    np.certified_precision = std::move(certified_precision);
    const long d = static_cast<long>(vals.size()) - 1;
    if (d < 0 || !vals.back().is_finite())
        throw precision_error("below-truncation", "leading coefficient is not known to be nonzero");
    long start = 0;
    while (start <= d && vals[static_cast<std::size_t>(start)].is_infinite()) ++start;
    if (!vals[static_cast<std::size_t>(start)].is_finite())
        throw precision_error("below-truncation",
                              "lowest coefficient a_" + std::to_string(start) + " is only known to be " +
                                  vals[static_cast<std::size_t>(start)].to_string());
    np.zero_order = start;

    std::vector<std::pair<long, Rat>> hull;
    auto cross_nonpositive = [](const std::pair<long, Rat>& o, const std::pair<long, Rat>& a,
                                const std::pair<long, Rat>& b) {
        // (a - o) x (b - o) <= 0  <=> a is on or above segment o-b
        Rat c = Rat(a.first - o.first) * (b.second - o.second) - (a.second - o.second) * Rat(b.first - o.first);
        return c <= 0;
    };
    for (long i = start; i <= d; ++i) {
        const auto& v = vals[static_cast<std::size_t>(i)];
        if (!v.is_finite()) continue;
        std::pair<long, Rat> pt{i, v.value()};
        while (hull.size() >= 2 && cross_nonpositive(hull[hull.size() - 2], hull.back(), pt)) hull.pop_back();
        hull.push_back(pt);
    }
    // Unknown coefficients must not be able to dip below the hull.
    for (long i = start; i <= d; ++i) {
        const auto& v = vals[static_cast<std::size_t>(i)];
        if (!v.is_bound()) continue;
        for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
            if (hull[k].first <= i && i <= hull[k + 1].first) {
                Rat line = hull[k].second + (hull[k + 1].second - hull[k].second) * Rat(i - hull[k].first) /
                                                Rat(hull[k + 1].first - hull[k].first);
                if (v.value() < line)
                    throw precision_error("below-truncation", "coefficient a_" + std::to_string(i) +
                                                                  " is only known to be " + v.to_string() +
                                                                  ", below the hull value " + line.get_str());
                break;
            }
        }
    }
    np.vertices = hull;
    for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
        long len = hull[k + 1].first - hull[k].first;
        Rat slope = (hull[k + 1].second - hull[k].second) / Rat(len);
        np.segments.push_back({slope, len});
    }
    return np;
}

long DistanceMultiset::total() const {
    long t = 0;
    for (const auto& [v, m] : entries) t += m;
    return t;
}

Rat DistanceMultiset::max_valuation() const {
    if (entries.empty()) throw precondition("no-distances", "distance multiset is empty");
    return entries.rbegin()->first;
}

Rat DistanceMultiset::min_valuation() const {
    if (entries.empty()) throw precondition("no-distances", "distance multiset is empty");
    return entries.begin()->first;
}

bool irreducibility_certified(const NewtonPolygon& np, long degree) {
    if (np.zero_order != 0 || np.segments.size() != 1) return false;
    return np.segments[0].length == degree && Int(np.segments[0].slope.get_den()) == degree;
}

}  // namespace valuniform
