#include "pulearn/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "pulearn/config.hpp"

namespace pulearn {

namespace {

std::string trim(std::string_view s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string_view::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(begin, end - begin + 1));
}

std::vector<std::string> split_fields(const std::string& line, char delimiter) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(delimiter, start);
        if (pos == std::string::npos) {
            fields.push_back(trim(std::string_view(line).substr(start)));
            break;
        }
        fields.push_back(trim(std::string_view(line).substr(start, pos - start)));
        start = pos + 1;
    }
    return fields;
}

bool parse_number(const std::string& cell, double& out) {
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && !cell.empty();
}

struct RawTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

RawTable read_table(const std::filesystem::path& path, char delimiter) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    RawTable table;
    std::string line;
    if (!std::getline(in, line)) throw ParseError("'" + path.string() + "' is empty");
    table.header = split_fields(line, delimiter);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto fields = split_fields(line, delimiter);
        if (fields.size() != table.header.size())
            throw ParseError(path.string() + ":" + std::to_string(lineno) + ": " +
                             std::to_string(fields.size()) + " fields, header has " +
                             std::to_string(table.header.size()));
        table.rows.push_back(std::move(fields));
    }
    return table;
}

std::size_t find_column(const RawTable& table, const std::string& name,
                        const std::filesystem::path& path) {
    const auto it = std::find(table.header.begin(), table.header.end(), name);
    if (it == table.header.end())
        throw MissingColumn("'" + path.string() + "' has no column '" + name + "'");
    return static_cast<std::size_t>(it - table.header.begin());
}

Dataset subset_rows(const Dataset& d, const std::vector<std::size_t>& rows) {
    Dataset out;
    out.features = Matrix(rows.size(), d.p());
    out.s_labels.resize(rows.size());
    if (d.y_labels) out.y_labels.emplace(rows.size());
    out.row_ids.resize(rows.size());
    out.feature_names = d.feature_names;
    out.name = d.name;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::size_t r = rows[i];
        const auto src = d.features.row(r);
        std::copy(src.begin(), src.end(), out.features.row(i).begin());
        out.s_labels[i] = d.s_labels[r];
        if (d.y_labels) (*out.y_labels)[i] = (*d.y_labels)[r];
        out.row_ids[i] = d.row_id(r);
    }
    return out;
}

std::string column_label(const Dataset& d, std::size_t j) {
    if (j < d.feature_names.size()) return "'" + d.feature_names[j] + "'";
    return "#" + std::to_string(j);
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path, const std::string& label_column,
                 const std::string& positive_value, char delimiter) {
    const RawTable table = read_table(path, delimiter);
    const std::size_t label_idx = find_column(table, label_column, path);
    const std::size_t n = table.rows.size();
    const std::size_t p = table.header.size() - 1;

    Dataset d;
    d.features = Matrix(n, p);
    d.s_labels.resize(n);
    d.y_labels.emplace(n);
    d.row_ids.resize(n);
    d.name = path.stem().string();
    for (std::size_t j = 0; j < table.header.size(); ++j)
        if (j != label_idx) d.feature_names.push_back(table.header[j]);

    for (std::size_t i = 0; i < n; ++i) {
        std::size_t out = 0;
        for (std::size_t j = 0; j < table.header.size(); ++j) {
            if (j == label_idx) continue;
            double v;
            if (!parse_number(table.rows[i][j], v))
                throw NonNumericFeature(path.string() + ": row " + std::to_string(i + 2) +
                                        ", column '" + table.header[j] + "': '" +
                                        table.rows[i][j] + "'");
            d.features(i, out++) = v;
        }
        const int y = table.rows[i][label_idx] == positive_value ? 1 : 0;
        (*d.y_labels)[i] = y;
        d.s_labels[i] = y;
        d.row_ids[i] = i;
    }
    return d;
}

DatasetRecipe load_recipe(const std::filesystem::path& path) {
    const KvConfig kv = KvConfig::parse_file(path);
    DatasetRecipe recipe;
    recipe.source = path.parent_path() / kv.require("file");
    recipe.label_column = kv.require("label_column");
    recipe.positive_value = kv.require("positive_value");
    recipe.one_hot = kv.get_list("one_hot");
    recipe.drop = kv.get_list("drop");
    const std::string delim = kv.get("delimiter").value_or(",");
    if (delim.size() != 1)
        throw ConfigError(path.string() + ": delimiter must be a single character");
    recipe.delimiter = delim[0];
    return recipe;
}

Dataset load_dataset(const DatasetRecipe& recipe) {
    const RawTable table = read_table(recipe.source, recipe.delimiter);
    const std::size_t label_idx = find_column(table, recipe.label_column, recipe.source);

    const auto listed = [](const std::vector<std::string>& names, const std::string& name) {
        return std::find(names.begin(), names.end(), name) != names.end();
    };
    for (const auto& name : recipe.one_hot) find_column(table, name, recipe.source);
    for (const auto& name : recipe.drop) find_column(table, name, recipe.source);

    // one-hot columns expand to one indicator per distinct value, in sorted order
    std::map<std::size_t, std::vector<std::string>> categories;
    for (std::size_t j = 0; j < table.header.size(); ++j) {
        if (j == label_idx || !listed(recipe.one_hot, table.header[j])) continue;
        std::set<std::string> values;
        for (const auto& row : table.rows) values.insert(row[j]);
        categories.emplace(j, std::vector<std::string>(values.begin(), values.end()));
    }

    std::vector<std::string> names;
    for (std::size_t j = 0; j < table.header.size(); ++j) {
        if (j == label_idx || listed(recipe.drop, table.header[j])) continue;
        if (const auto it = categories.find(j); it != categories.end())
            for (const auto& value : it->second) names.push_back(table.header[j] + "=" + value);
        else
            names.push_back(table.header[j]);
    }

    const std::size_t n = table.rows.size();
    Dataset d;
    d.features = Matrix(n, names.size());
    d.s_labels.resize(n);
    d.y_labels.emplace(n);
    d.row_ids.resize(n);
    d.feature_names = names;
    d.name = recipe.source.stem().string();

    for (std::size_t i = 0; i < n; ++i) {
        std::size_t out = 0;
        for (std::size_t j = 0; j < table.header.size(); ++j) {
            if (j == label_idx || listed(recipe.drop, table.header[j])) continue;
            if (const auto it = categories.find(j); it != categories.end()) {
                for (const auto& value : it->second)
                    d.features(i, out++) = table.rows[i][j] == value ? 1.0 : 0.0;
            } else {
                double v;
                if (!parse_number(table.rows[i][j], v))
                    throw NonNumericFeature(recipe.source.string() + ": row " +
                                            std::to_string(i + 2) + ", column '" +
                                            table.header[j] + "': '" + table.rows[i][j] + "'");
                d.features(i, out++) = v;
            }
        }
        const int y = table.rows[i][label_idx] == recipe.positive_value ? 1 : 0;
        (*d.y_labels)[i] = y;
        d.s_labels[i] = y;
        d.row_ids[i] = i;
    }
    return d;
}

std::pair<Dataset, StandardizeRecord> standardize(const Dataset& d) {
    const std::size_t n = d.n();
    const std::size_t p = d.p();
    if (n < 2) throw InvalidArgument("standardize: need at least two rows");

    StandardizeRecord record;
    record.shift.resize(p);
    record.scale.resize(p);
    for (std::size_t j = 0; j < p; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += d.features(i, j);
        mean /= static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double delta = d.features(i, j) - mean;
            ss += delta * delta;
        }
        const double variance = ss / static_cast<double>(n - 1);
        if (variance <= 0.0)
            throw ConstantFeature("standardize: column " + column_label(d, j) +
                                  " has no variance");
        record.shift[j] = mean;
        record.scale[j] = std::sqrt(variance);
    }
    return {apply_standardize(record, d), record};
}

Dataset apply_standardize(const StandardizeRecord& record, const Dataset& d) {
    if (record.shift.size() != d.p() || record.scale.size() != d.p())
        throw DimensionMismatch("apply_standardize: record has " +
                                std::to_string(record.shift.size()) + " columns, dataset has " +
                                std::to_string(d.p()));
    Dataset out = d;
    for (std::size_t i = 0; i < d.n(); ++i)
        for (std::size_t j = 0; j < d.p(); ++j)
            out.features(i, j) = (d.features(i, j) - record.shift[j]) / record.scale[j];
    return out;
}

Dataset scar_relabel(const Dataset& d, double c, std::uint64_t seed) {
    if (!d.y_labels) throw MissingTruth("scar_relabel: dataset has no ground-truth labels");
    if (!(c > 0.0 && c <= 1.0))
        throw COutOfRange("scar_relabel: label frequency " + std::to_string(c) +
                          " outside (0, 1]");
    const CounterRng root(seed);
    Dataset out = d;
    for (std::size_t i = 0; i < d.n(); ++i) {
        const int y = (*d.y_labels)[i];
        out.s_labels[i] = y == 1 && root.fork(d.row_id(i)).uniform() < c ? 1 : 0;
    }
    return out;
}

std::pair<Dataset, Dataset> split(const Dataset& d, const SplitSpec& spec,
                                  std::size_t replication) {
    if (!(spec.test_fraction > 0.0 && spec.test_fraction < 1.0))
        throw InvalidArgument("split: test_fraction outside (0, 1)");
    if (spec.n_replications < 1) throw InvalidArgument("split: n_replications must be >= 1");
    if (replication >= spec.n_replications)
        throw InvalidArgument("split: replication " + std::to_string(replication) +
                              " >= n_replications " + std::to_string(spec.n_replications));

    const std::size_t n = d.n();
    const std::size_t test_size =
        static_cast<std::size_t>(std::llround(static_cast<double>(n) * spec.test_fraction));
    if (test_size == 0 || test_size >= n)
        throw EmptySplit("split: test size " + std::to_string(test_size) + " of " +
                         std::to_string(n) + " rows");

    // Fisher-Yates with a replication-forked stream
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    CounterRng rng = CounterRng(spec.seed).fork(replication);
    for (std::size_t i = n; i-- > 1;) {
        const std::size_t j = static_cast<std::size_t>(rng.next_u64() % (i + 1));
        std::swap(order[i], order[j]);
    }

    std::vector<std::size_t> test_rows(order.begin(), order.begin() + test_size);
    std::vector<std::size_t> train_rows(order.begin() + test_size, order.end());
    std::sort(test_rows.begin(), test_rows.end());
    std::sort(train_rows.begin(), train_rows.end());
    return {subset_rows(d, train_rows), subset_rows(d, test_rows)};
}

}  // namespace pulearn
