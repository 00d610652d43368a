#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

namespace cqed {

// Maps fn over inputs on up to `threads` workers. Results keep input order; the
// exception of the lowest failing index is rethrown.
template <typename T, typename Fn>
auto parallel_map(const std::vector<T>& inputs, int threads, Fn fn)
    -> std::vector<decltype(fn(inputs.front()))>
{
    using R = decltype(fn(inputs.front()));
    std::vector<std::optional<R>> slots(inputs.size());
    std::vector<std::exception_ptr> errors(inputs.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t i = next++; i < inputs.size(); i = next++) {
            try {
                slots[i].emplace(fn(inputs[i]));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    const auto workers = static_cast<std::size_t>(std::max(1, threads));
    if (workers == 1 || inputs.size() < 2) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < std::min(workers, inputs.size()); ++w) {
            pool.emplace_back(worker);
        }
    }

    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    std::vector<R> out;
    out.reserve(inputs.size());
    for (auto& s : slots) {
        out.push_back(std::move(*s));
    }
    return out;
}

} // namespace cqed
