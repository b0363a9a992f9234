#include "matmcd/prompt/templates.hpp"

namespace matmcd::prompt {

const std::string_view kSearchTemplate =
    R"(Assume you have no prior knowledge about the {{dataset_name}} dataset and its nodes {{node_names}}. You need to generate queries for others who can search for information that will help you summarize the dataset and the nodes, and help you recognize the relationships between the nodes.

Split your query into multiple sub-queries. Ensure each query is specific, clear, and easy to be used for search. If you have inquired about this topic before, your previous queries are:

{{previous_queries}}

Please try to avoid repeating these queries. Generate a new query to get more information. Format your query as follows:

Search Query: <new query>

You should generate only one query at a time. If you think no additional queries are needed, please state 'No query needed'.)";

const std::string_view kSearchRepeatNotice =
    R"(Your last query "{{repeated_query}}" repeats one of the previous queries. Generate a different query, or state 'No query needed'.)";

const std::string_view kSummaryRagTemplate =
    R"(Please provide a summary of the {{dataset_name}} dataset and its nodes including {{node_names}} using the information from the RAG Database. Your response should include detailed information on the dataset and each of its nodes.

Follow the structured format below in your answer:

- Dataset Summary: <a general summary of the dataset>

- Summary of <node name>: <a detailed summary of this node>

- Summary of <node name>: <a detailed summary of this node>

Additionally, try to include information on the relationships between the nodes after you have summarized each one. Make sure to cover all the nodes mentioned.

RAG Database:

{{rag_excerpts}})";

const std::string_view kSummaryLogTemplate =
    R"(In {{dataset_name}} dataset, the following entities are included: {{node_names}}. The log information about the entity {{node_name}} is provided in the following format:

{{log_format}}

Below are the information in the log following the above format:

{{log_events}}

Based on the above information, please provide your summary of this entity: {{node_name}}, including:

- The role of the entity: {{node_name}} in the system

- The key events that need to be noticed. Need to pay attention to both frequent and infrequent occurrences

- The status of this entity

- The relationships this entity: {{node_name}} has with other entities in the above entity list. Only include the most likely ones.

You only need to provide the information about this entity: {{node_name}}. Your response should be in the following format:

The name of the entity: {{node_name}}

Role of the entity: <role>

Key events that need to be noticed: <key events>

The status of this entity: <status>

The relationships of {{node_name}}: <relationships>

Your response:)";

const std::string_view kKnowledgeTemplate =
    R"(We want to perform causal discovery on {{dataset_name}} , the summary of dataset: {{dataset_information}}. Considering {{node_names}} as variables. We have conducted the statistical causal discovery with {{algorithm_name}} algorithm.

The edges and their coefficients of the causal structure suggested by the statistical discovery are as follows:

{{adjacency_list}}

Based on the information above, it seems that changes in {{node_i}} have {{a_or_no}} direct impact on {{node_j}}. In addition, here is the information of {{node_i}} and {{node_j}} from reliable sources:

{{info_i}}

{{info_j}}

Your task is to interpret this result from a domain knowledge perspective and determine whether this statistically suggested hypothesis is plausible in the context of the domain. Please provide an explanation that leverages your expert knowledge on the causal relationship between {{node_i}} and {{node_j}}, and assess the correctness of this causal discovery result.

Your response should consider the relevant factors and provide a reasonable explanation based on your understanding of the domain.)";

const std::string_view kConstraintTemplate =
    R"(Provide your {{k}} best guesses and the probability that each is correct (0.0 to 1.0) for the following question. Give ONLY the guesses and probabilities, no other words or explanation. Each guess should infer the relationship step by step and finally end with <Yes> or <No>. For example:

G1: <the first most likely guess, infer the relationship step by step and end with <Yes> or <No> >

P1: <the probability between 0.0 and 1.0 that G1 is correct, without any extra comments; just the probability!>

G2: <the second most likely guess, infer the relationship step by step and end with <Yes> or <No> >

P2: <the probability between 0.0 and 1.0 that G2 is correct, without any extra comments; just the probability!>

The question is: here is the explanation from an expert in the field of {{dataset_name}} regarding the causal relationship between {{node_i}} and {{node_j}}:

{{explanation}}

Considering the information above, if {{node_i}} is modified, will it have a direct impact on {{node_j}}?)";

const std::vector<TemplateSpec>& all_templates() {
    static const std::vector<TemplateSpec> specs = {
        {"search", kSearchTemplate, {"dataset_name", "node_names", "previous_queries"}},
        {"search_repeat", kSearchRepeatNotice, {"repeated_query"}},
        {"summary_rag", kSummaryRagTemplate, {"dataset_name", "node_names", "rag_excerpts"}},
        {"summary_log", kSummaryLogTemplate,
         {"dataset_name", "node_names", "node_name", "log_format", "log_events"}},
        {"knowledge", kKnowledgeTemplate,
         {"dataset_name", "dataset_information", "node_names", "algorithm_name", "adjacency_list", "node_i",
          "node_j", "a_or_no", "info_i", "info_j"}},
        {"constraint", kConstraintTemplate, {"k", "dataset_name", "node_i", "node_j", "explanation"}},
    };
    return specs;
}

}  // namespace matmcd::prompt
