#include "wickworks/budget.hpp"

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <sstream>

namespace wickworks {

namespace {

Budget& current() {
    static Budget b = [] {
        const char* env = std::getenv("WICKWORKS_BUDGET");
        return env ? parse_budget(env) : Budget{};
    }();
    return b;
}

std::atomic<int> thread_setting{0};

template <class T>
T parse_number(const std::string& key, const std::string& text) {
    T value{};
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc{} || ptr != end || value < T{})
        throw std::invalid_argument("budget: bad value '" + text + "' for " + key);
    return value;
}

}  // namespace

Budget parse_budget(const std::string& text) {
    Budget b;
    if (text.empty()) return b;
    if (text.find('=') == std::string::npos) {
        b.matchings = parse_number<std::uint64_t>("matchings", text);
        return b;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("budget: expected key=value, got '" + item + "'");
        const std::string key = item.substr(0, eq), value = item.substr(eq + 1);
        if (key == "matchings")
            b.matchings = parse_number<std::uint64_t>(key, value);
        else if (key == "order")
            b.max_order = parse_number<int>(key, value);
        else if (key == "nested")
            b.nested_terms = parse_number<double>(key, value);
        else if (key == "loops")
            b.max_loops = parse_number<int>(key, value);
        else
            throw std::invalid_argument("budget: unknown key '" + key + "'");
    }
    return b;
}

const Budget& budget() { return current(); }
void set_budget(const Budget& b) { current() = b; }

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + (index + 1) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

void set_default_threads(int n) { thread_setting = n; }

int default_threads() {
    const int n = thread_setting.load();
    if (n > 0) return n;
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace wickworks
