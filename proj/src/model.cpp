#include "vsc/model.hpp"

#include "vsc/errors.hpp"

#include <charconv>
#include <vector>

namespace vsc {

namespace {

int parse_int(std::string_view s, const char *what)
{
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw UsageError(std::string("bad ") + what + ": '" + std::string(s) + "'");
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> out;
    while (true) {
        auto pos = s.find(sep);
        out.push_back(s.substr(0, pos));
        if (pos == std::string_view::npos) break;
        s.remove_prefix(pos + 1);
    }
    return out;
}

} // namespace

Model Model::projective(int N)
{
    if (N < 3) throw UsageError("projective space needs N >= 3");
    return Model{Kind::ProjectiveSpace, N, 1};
}

Model Model::hypersurface(int N, int k)
{
    if (N < 3 || k < 1) throw UsageError("hypersurface needs N >= 3 and k >= 1");
    return Model{Kind::Hypersurface, N, k};
}

Model Model::parse(std::string_view text)
{
    auto parts = split(text, ':');
    if (parts.size() == 2 && parts[0] == "cp") return projective(parse_int(parts[1], "N"));
    if (parts.size() == 3 && parts[0] == "hyp") return hypersurface(parse_int(parts[1], "N"), parse_int(parts[2], "k"));
    throw UsageError("model must be cp:N or hyp:N:k, got '" + std::string(text) + "'");
}

std::string Model::key() const
{
    return is_hypersurface() ? "hyp:" + std::to_string(N) + ":" + std::to_string(k) : "cp:" + std::to_string(N);
}

std::string insertion_key(const InsertionProfile &ins)
{
    std::string out;
    for (const auto &[j, m] : ins) {
        if (m == 0) continue;
        if (!out.empty()) out += ",";
        out += std::to_string(j) + ":" + std::to_string(m);
    }
    return out;
}

InsertionProfile parse_insertions(std::string_view text)
{
    InsertionProfile ins;
    if (text.empty()) return ins;
    for (auto item : split(text, ',')) {
        auto jm = split(item, ':');
        if (jm.size() != 2) throw UsageError("insertion must be j:m, got '" + std::string(item) + "'");
        const int j = parse_int(jm[0], "class exponent");
        const int m = parse_int(jm[1], "multiplicity");
        if (j < 0 || m < 0) throw UsageError("insertion exponents and multiplicities must be >= 0");
        if (m > 0) ins[j] += m;
    }
    return ins;
}

int insertion_count(const InsertionProfile &ins)
{
    int n = 0;
    for (const auto &[j, m] : ins) n += m;
    return n;
}

int insertion_weight(const InsertionProfile &ins)
{
    int w = 0;
    for (const auto &[j, m] : ins) w += m * (j - 1);
    return w;
}

std::string CorrelatorSpec::key() const
{
    std::string s = model.key() + (sector == Sector::Closed ? "|closed" : "|open") + "|d=" + std::to_string(d)
                    + "|a=" + std::to_string(a);
    if (sector == Sector::Closed) s += "|b=" + std::to_string(b);
    return s + "|ins=" + insertion_key(insertions);
}

} // namespace vsc
