// SPDX-License-Identifier: Apache-2.0
#include "hillpr/transforms.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "hillpr/error.hpp"
#include "hillpr/special.hpp"

namespace hillpr
{
namespace
{
double parse_double(std::string_view text)
{
    double value = 0;
    auto const* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value))
    {
        throw InvalidArgument("bad number in transform: '" + std::string(text)
                              + "'");
    }
    return value;
}

double clamp_inward(double u, std::size_t* clamp_events)
{
    if (u > 0 && u < 1)
    {
        return u;
    }
    if (clamp_events)
    {
        ++*clamp_events;
    }
    return u <= 0 ? std::nextafter(0.0, 1.0) : std::nextafter(1.0, 0.0);
}
}  // namespace

TransformSpec TransformSpec::affine(double lo, double hi)
{
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
    {
        throw InvalidArgument("affine transform needs finite lo < hi");
    }
    return {Kind::affine, lo, hi};
}

TransformSpec TransformSpec::parse(std::string_view text)
{
    if (text == "identity")
    {
        return identity();
    }
    if (text == "logit")
    {
        return logit();
    }
    constexpr std::string_view prefix = "affine:";
    if (text.starts_with(prefix))
    {
        auto rest = text.substr(prefix.size());
        auto const colon = rest.find(':');
        if (colon == std::string_view::npos)
        {
            throw InvalidArgument("affine transform must be 'affine:lo:hi'");
        }
        return affine(parse_double(rest.substr(0, colon)),
                      parse_double(rest.substr(colon + 1)));
    }
    throw InvalidArgument("unknown transform '" + std::string(text) + "'");
}

std::string TransformSpec::to_string() const
{
    switch (kind)
    {
        case Kind::identity:
            return "identity";
        case Kind::logit:
            return "logit";
        case Kind::affine: {
            char buf[64];
            auto* p = std::to_chars(buf, buf + sizeof(buf), lo).ptr;
            *p++ = ':';
            p = std::to_chars(p, buf + sizeof(buf), hi).ptr;
            return "affine:" + std::string(buf, p);
        }
    }
    return {};
}

double to_unit(TransformSpec const& spec, double x, std::size_t* clamp_events)
{
    if (!std::isfinite(x))
    {
        throw DomainError("transform input must be finite");
    }
    switch (spec.kind)
    {
        case TransformSpec::Kind::identity:
            if (x < 0 || x > 1)
            {
                throw DomainError("identity transform needs data in [0, 1], got "
                                  + std::to_string(x));
            }
            return clamp_inward(x, clamp_events);
        case TransformSpec::Kind::logit:
            return clamp_inward(expit(x), clamp_events);
        case TransformSpec::Kind::affine:
            if (x < spec.lo || x > spec.hi)
            {
                throw DomainError("value " + std::to_string(x)
                                  + " outside affine range");
            }
            return clamp_inward((x - spec.lo) / (spec.hi - spec.lo),
                                clamp_events);
    }
    return x;
}

double from_unit(TransformSpec const& spec, double u)
{
    if (!(u > 0 && u < 1))
    {
        throw DomainError("unit value outside (0, 1): " + std::to_string(u));
    }
    switch (spec.kind)
    {
        case TransformSpec::Kind::identity:
            return u;
        case TransformSpec::Kind::logit:
            return logit(u);
        case TransformSpec::Kind::affine:
            return spec.lo + u * (spec.hi - spec.lo);
    }
    return u;
}

std::vector<double> to_unit(TransformSpec const& spec,
                            std::span<double const> xs,
                            std::size_t* clamp_events)
{
    std::vector<double> out(xs.size());
    std::transform(xs.begin(), xs.end(), out.begin(), [&](double x) {
        return to_unit(spec, x, clamp_events);
    });
    return out;
}

TransformSpec choose_transform(std::span<double const> data)
{
    bool const inside = std::all_of(
        data.begin(), data.end(), [](double x) { return x > 0 && x < 1; });
    return inside ? TransformSpec::identity() : TransformSpec::logit();
}

std::vector<std::size_t> ranks(std::span<double const> data)
{
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return data[a] < data[b]; });
    std::vector<std::size_t> result(data.size());
    for (std::size_t i = 0; i < order.size(); ++i)
    {
        if (i > 0 && data[order[i]] == data[order[i - 1]])
        {
            throw TieError("tied values prevent ranking: "
                           + std::to_string(data[order[i]]));
        }
        result[order[i]] = i + 1;
    }
    return result;
}

std::vector<double> gaussian_scores(std::span<double const> data)
{
    auto const r = ranks(data);
    auto const n1 = static_cast<double>(data.size() + 1);
    std::vector<double> scores(r.size());
    for (std::size_t i = 0; i < r.size(); ++i)
    {
        // Evaluate the lower half and reflect so rank pairs are exact negatives
        std::size_t const mirror = data.size() + 1 - r[i];
        if (r[i] <= mirror)
        {
            scores[i] = normal_quantile(Probability{static_cast<double>(r[i]) / n1});
        }
        else
        {
            scores[i]
                = -normal_quantile(Probability{static_cast<double>(mirror) / n1});
        }
    }
    return scores;
}

}  // namespace hillpr
