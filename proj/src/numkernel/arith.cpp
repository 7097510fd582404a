#include <map>
#include <mutex>
#include <sstream>

#include "eiscrit/numkernel.hpp"
#include "tables.hpp"

namespace eiscrit {

RationalNumber::RationalNumber(long n, long d) {
  if (d == 0) throw DomainError("zero denominator");
  q_ = mpq_class(n, d);
  q_.canonicalize();
}

RationalNumber RationalNumber::parse(const std::string& s) {
  std::string t;
  for (char c : s)
    if (c != ' ') t.push_back(c);
  if (t.empty()) throw DomainError("empty rational");
  if (t[0] == '+') t.erase(0, 1);
  mpq_class q;
  if (q.set_str(t, 10) != 0 || q.get_den() == 0) throw DomainError("malformed rational: " + s);
  q.canonicalize();
  return RationalNumber(q);
}

std::string RationalNumber::str() const {
  if (q_.get_den() == 1) return q_.get_num().get_str() + "/1";
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

long double RationalNumber::to_ld() const {
  PrecisionScope ps(80);
  return MpReal(q_).to_ld();
}

RationalNumber operator/(const RationalNumber& a, const RationalNumber& b) {
  if (b.is_zero()) throw DomainError("division by zero rational");
  return RationalNumber(mpq_class(a.q_ / b.q_));
}

// ---------------------------------------------------------------------------
// Bernoulli numbers (Akiyama-Tanigawa), memoized

namespace {
std::mutex bern_mu;
std::vector<mpq_class> bern_memo;  // B_0 .. B_n
}

RationalNumber bernoulli(int k) {
  if (k < 2 || k % 2) throw DomainError("bernoulli: k must be even and >= 2");
  std::lock_guard<std::mutex> lock(bern_mu);
  if (static_cast<int>(bern_memo.size()) <= k) {
    int n = std::max(k, 2 * static_cast<int>(bern_memo.size()));
    std::vector<mpq_class> a(n + 1), out(n + 1);
    for (int m = 0; m <= n; ++m) {
      a[m] = mpq_class(1, m + 1);
      for (int j = m; j >= 1; --j) {
        a[j - 1] = j * (a[j - 1] - a[j]);
        a[j - 1].canonicalize();
      }
      out[m] = a[0];
    }
    bern_memo = std::move(out);
  }
  return RationalNumber(bern_memo[k]);
}

RationalNumber eisenstein_multiplier(int k) { return RationalNumber(-2L * k) / bernoulli(k); }

mpz_class divisor_power_sum(long n, int e) {
  if (n <= 0) throw DomainError("divisor_power_sum: n must be positive");
  if (e < 0) throw DomainError("divisor_power_sum: e must be non-negative");
  mpz_class s = 0, p;
  for (long d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    mpz_ui_pow_ui(p.get_mpz_t(), d, e);
    s += p;
    long o = n / d;
    if (o != d) {
      mpz_ui_pow_ui(p.get_mpz_t(), o, e);
      s += p;
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// sigma tables

namespace detail {
namespace {

std::mutex sig_mu;
std::map<int, std::shared_ptr<const std::vector<mpz_class>>> sig_exact;
std::map<int, std::shared_ptr<const std::vector<long double>>> sig_ld;
std::map<std::pair<int, int>, std::shared_ptr<const std::vector<MpReal>>> sig_mp;

long grown(long have, long want) { return std::max(want, 2 * have + 64); }

// caller holds sig_mu
std::shared_ptr<const std::vector<mpz_class>> exact_locked(int e, long count) {
  auto& slot = sig_exact[e];
  if (slot && static_cast<long>(slot->size()) > count) return slot;
  long have = slot ? static_cast<long>(slot->size()) - 1 : 0;
  long n = grown(have, count);
  // sieve: add d^e to every multiple of d
  std::vector<mpz_class> t(n + 1, 0);
  mpz_class p;
  for (long d = 1; d <= n; ++d) {
    mpz_ui_pow_ui(p.get_mpz_t(), d, e);
    for (long m = d; m <= n; m += d) t[m] += p;
  }
  slot = std::make_shared<const std::vector<mpz_class>>(std::move(t));
  return slot;
}

}  // namespace

std::shared_ptr<const std::vector<long double>> sigma_table_ld(int e, long count) {
  std::lock_guard<std::mutex> lock(sig_mu);
  auto& slot = sig_ld[e];
  if (slot && static_cast<long>(slot->size()) > count) return slot;
  auto ex = exact_locked(e, count);
  std::vector<long double> t(ex->size());
  PrecisionScope ps(80);
  MpReal tmp;
  for (size_t i = 0; i < t.size(); ++i) {
    mpfr_set_z(tmp.raw(), (*ex)[i].get_mpz_t(), MPFR_RNDN);
    t[i] = tmp.to_ld();
  }
  slot = std::make_shared<const std::vector<long double>>(std::move(t));
  return slot;
}

std::shared_ptr<const std::vector<MpReal>> sigma_table_mp(int e, long count, int bits) {
  std::lock_guard<std::mutex> lock(sig_mu);
  auto& slot = sig_mp[{e, bits}];
  if (slot && static_cast<long>(slot->size()) > count) return slot;
  auto ex = exact_locked(e, count);
  PrecisionScope ps(bits);
  std::vector<MpReal> t;
  t.reserve(ex->size());
  for (const auto& v : *ex) t.emplace_back(v);
  slot = std::make_shared<const std::vector<MpReal>>(std::move(t));
  return slot;
}

}  // namespace detail
}  // namespace eiscrit
