#pragma once

#include <algorithm>
#include <cstddef>
#include <future>
#include <span>
#include <utility>
#include <vector>

namespace textbends {

template <typename Key, typename Value>
class Emitter {
  public:
    void emit(Key key, Value value) { pairs_.emplace_back(std::move(key), std::move(value)); }
    std::vector<std::pair<Key, Value>>& pairs() { return pairs_; }

  private:
    std::vector<std::pair<Key, Value>> pairs_;
};

/// In-process map -> shuffle -> reduce.
///
/// The input is cut into `partitions` contiguous splits that are mapped
/// concurrently. The shuffle concatenates the split outputs in split order and
/// stable-sorts them by key, so every reducer sees its values in input order
/// and the output is ordered by ascending key regardless of the partition
/// count.
///
///   mapper(const Input&, Emitter<Key, Value>&)
///   reducer(const Key&, std::span<const Value>) -> Value
template <typename Key, typename Value, typename Input, typename Mapper, typename Reducer>
std::vector<std::pair<Key, Value>> map_reduce(std::span<const Input> inputs, std::size_t partitions, Mapper mapper,
                                              Reducer reducer) {
    partitions = std::max<std::size_t>(1, std::min(partitions, inputs.size()));
    std::vector<std::future<std::vector<std::pair<Key, Value>>>> tasks;
    const std::size_t chunk = inputs.empty() ? 0 : (inputs.size() + partitions - 1) / partitions;
    for (std::size_t begin = 0; begin < inputs.size(); begin += chunk) {
        const auto split = inputs.subspan(begin, std::min(chunk, inputs.size() - begin));
        auto run = [split, &mapper] {
            Emitter<Key, Value> out;
            for (const auto& in : split) mapper(in, out);
            return std::move(out.pairs());
        };
        if (partitions == 1)
            tasks.push_back(std::async(std::launch::deferred, run));
        else
            tasks.push_back(std::async(std::launch::async, run));
    }

    std::vector<std::pair<Key, Value>> shuffled;
    for (auto& t : tasks) {
        auto part = t.get();
        shuffled.insert(shuffled.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    std::stable_sort(shuffled.begin(), shuffled.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    std::vector<std::pair<Key, Value>> reduced;
    std::vector<Value> group;
    for (std::size_t i = 0; i < shuffled.size();) {
        std::size_t j = i;
        group.clear();
        while (j < shuffled.size() && shuffled[j].first == shuffled[i].first) group.push_back(shuffled[j++].second);
        reduced.emplace_back(shuffled[i].first, reducer(shuffled[i].first, std::span<const Value>(group)));
        i = j;
    }
    return reduced;
}

}  // namespace textbends
