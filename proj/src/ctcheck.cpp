#include "flatline/ctcheck.hpp"

#include <map>
#include <random>

namespace flatline {

Policy policy_for(const Program& p, Interval domain)
{
    Policy pol;
    pol.secret_domain = domain;
    pol.public_domain = domain;
    for (const auto& v : upward_exposed(*p.body)) {
        if (p.secrets.contains(v))
            pol.secrets.insert(v);
        else
            pol.publics.insert(v);
    }
    return pol;
}

bool phi(const Store& a, const Store& b, const Policy& pol)
{
    for (const auto& v : pol.publics) {
        auto ia = a.find(v);
        auto ib = b.find(v);
        if (ia == a.end() || ib == b.end())
            throw EvalError({RuntimeErrorKind::UnboundVariable, v});
        if (ia->second != ib->second)
            return false;
    }
    return true;
}

namespace {

std::vector<Store> assignments(const std::set<std::string>& vars, Interval dom)
{
    std::vector<Store> out{Store{}};
    for (const auto& v : vars) {
        std::vector<Store> next;
        next.reserve(out.size() * dom.count());
        for (const auto& s : out) {
            for (Value x = dom.lo; x <= dom.hi; ++x) {
                Store t = s;
                t[v] = x;
                next.push_back(std::move(t));
            }
        }
        out = std::move(next);
    }
    return out;
}

/// dom.count()^n, saturating at UINT64_MAX.
std::uint64_t space(std::uint64_t base, std::size_t n)
{
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < n; ++i)
        if (__builtin_mul_overflow(r, base, &r))
            return UINT64_MAX;
    return r;
}

Store merge(const Store& a, const Store& b)
{
    Store out = a;
    out.insert(b.begin(), b.end());
    return out;
}

Store draw(std::mt19937_64& rng, const std::set<std::string>& vars, Interval dom)
{
    Store s;
    for (const auto& v : vars)
        s[v] = dom.lo + static_cast<Value>(rng() % dom.count());
    return s;
}

} // namespace

std::vector<StorePair> enumerate_pairs(const Policy& pol, const PairMode& mode)
{
    if (pol.secret_domain.count() == 0 || pol.public_domain.count() == 0)
        throw Error("empty value domain");
    std::vector<StorePair> out;
    if (pol.secrets.empty())
        return out;
    std::uint64_t nsec = space(pol.secret_domain.count(), pol.secrets.size());
    if (nsec < 2)
        return out;

    if (mode.kind == PairMode::Kind::Exhaustive) {
        std::uint64_t npub = space(pol.public_domain.count(), pol.publics.size());
        std::uint64_t total{};
        if (__builtin_mul_overflow(nsec, npub, &total) || total > mode.bound)
            throw BoundExceeded("exhaustive store space exceeds bound " + std::to_string(mode.bound));
        auto secret_stores = assignments(pol.secrets, pol.secret_domain);
        for (const auto& pub : assignments(pol.publics, pol.public_domain)) {
            for (std::size_t i = 0; i < secret_stores.size(); ++i)
                for (std::size_t j = i + 1; j < secret_stores.size(); ++j)
                    out.emplace_back(merge(pub, secret_stores[i]), merge(pub, secret_stores[j]));
        }
        return out;
    }

    std::mt19937_64 rng(mode.seed);
    out.reserve(mode.samples);
    for (std::size_t k = 0; k < mode.samples; ++k) {
        Store pub = draw(rng, pol.publics, pol.public_domain);
        Store a = draw(rng, pol.secrets, pol.secret_domain);
        Store b = draw(rng, pol.secrets, pol.secret_domain);
        while (a == b)
            b = draw(rng, pol.secrets, pol.secret_domain);
        out.emplace_back(merge(pub, a), merge(pub, b));
    }
    return out;
}

std::string_view to_string(Witness::Kind k)
{
    return k == Witness::Kind::LeakMismatch ? "LeakMismatch" : "FinalityMismatch";
}

std::string_view to_string(Verdict::Kind k)
{
    switch (k) {
    case Verdict::Kind::Secure: return "Secure";
    case Verdict::Kind::Insecure: return "Insecure";
    case Verdict::Kind::Inconclusive: return "Inconclusive";
    }
    return "?";
}

namespace {

struct Run
{
    std::vector<Leakage> leaks;
    RunStatus status{};
    std::optional<RuntimeError> error;
};

bool observed_equal(const Leakage& a, const Leakage& b, Observer o)
{
    return o == Observer::Length ? a.size() == b.size() : a == b;
}

enum class Outcome
{
    Agree,
    Diverge,
    Unfinished,
};

Outcome compare(const Run& a, const Run& b, Observer o, Witness& w)
{
    std::size_t common = std::min(a.leaks.size(), b.leaks.size());
    for (std::size_t k = 0; k < common; ++k) {
        if (!observed_equal(a.leaks[k], b.leaks[k], o)) {
            w.kind = Witness::Kind::LeakMismatch;
            w.step = k + 1;
            w.leak_a = a.leaks[k];
            w.leak_b = b.leaks[k];
            return Outcome::Diverge;
        }
    }
    bool a_final = a.status == RunStatus::Terminated && a.leaks.size() == common;
    bool b_final = b.status == RunStatus::Terminated && b.leaks.size() == common;
    if (a_final && b_final)
        return Outcome::Agree;
    if (a_final != b_final) {
        // The other side must provably continue past this point.
        const Run& other = a_final ? b : a;
        if (other.leaks.size() > common || other.status == RunStatus::Terminated) {
            w.kind = Witness::Kind::FinalityMismatch;
            w.step = common;
            if (a.leaks.size() > common)
                w.leak_a = a.leaks[common];
            if (b.leaks.size() > common)
                w.leak_b = b.leaks[common];
            return Outcome::Diverge;
        }
    }
    return Outcome::Unfinished;
}

} // namespace

Verdict check_oni(const Program& p, const Policy& pol, const PairMode& mode, std::size_t max_steps)
{
    auto pairs = enumerate_pairs(pol, mode);
    std::map<Store, Run> cache;
    auto trace_of = [&](const Store& s) -> const Run& {
        auto it = cache.find(s);
        if (it != cache.end())
            return it->second;
        Trace t = run({p.body, s}, {max_steps, false});
        Run r;
        r.status = t.status;
        r.error = t.error;
        r.leaks.reserve(t.steps.size());
        for (auto& st : t.steps)
            r.leaks.push_back(std::move(st.leak));
        return cache.emplace(s, std::move(r)).first->second;
    };

    Verdict v;
    std::optional<RunStatus> unfinished;
    std::string unfinished_detail;
    for (const auto& [sa, sb] : pairs) {
        const Run& ra = trace_of(sa);
        const Run& rb = trace_of(sb);
        ++v.pairs_checked;
        Witness w;
        switch (compare(ra, rb, pol.observer, w)) {
        case Outcome::Agree: break;
        case Outcome::Diverge:
            w.store_a = sa;
            w.store_b = sb;
            v.kind = Verdict::Kind::Insecure;
            v.witness = std::move(w);
            return v;
        case Outcome::Unfinished:
            if (!unfinished) {
                const Run& bad = ra.status != RunStatus::Terminated ? ra : rb;
                unfinished = bad.status;
                unfinished_detail = bad.error ? to_string(*bad.error)
                                              : "step limit " + std::to_string(max_steps) + " reached";
            }
            break;
        }
    }
    if (unfinished) {
        v.kind = Verdict::Kind::Inconclusive;
        v.reason = unfinished;
        v.detail = unfinished_detail;
    }
    return v;
}

} // namespace flatline
