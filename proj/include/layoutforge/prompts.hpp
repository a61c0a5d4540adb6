#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "layoutforge/errors.hpp"

namespace layoutforge {

/// Prompt templates for every model role. Bodies are frozen assets;
/// placeholders are `{name}` slots substituted byte-for-byte by
/// render_prompt. Literal braces elsewhere in a body (JSON schema examples,
/// layout-line grammar) are left untouched because substitution only targets
/// the declared placeholder set.
enum class TemplateId {
  cot_datagen,
  lifting,
  quant_eval,
  spatial_eval,
  description_gen,
  simple_reward,
  bev_generate,
  alignment_feedback,
};

namespace prompt_bodies {

inline constexpr std::string_view kCotDatagen = R"LFPT(Given a BEV layout for a scene, first output a short prompt summarizing the scene, and then write a logical thought process when planning this layout, modeled after the following chain of thought example. The layout follows the CSS style, where each line starts with the object description and is followed by its absolute position. Formally, each line should be like "object {length: ?px; width: ?px; center_x: ?px; center_y: ?px; orientation: ? degrees;}". You can simply interpret the length and width as the dimensions of the object itself, with center_x and center_y indicating translation (or the center point of the object) and orientation indicating rotation. Note that the 0 degrees representation is aligned with the direction of the positive half-axis of the axes where "width" and "center_y" are located. The image is {max_length}px long and {max_width}px wide. Therefore, all bounding boxes should try not to exceed 256px after rotation.

Below are the steps of the chain of thought:
1. Extract from the text description which objects should be placed in the scene and how many of each of these are specifically needed.
2. List the order in which to place each type of object, generally starting with the large and major objects, then moving on to the decorative and minor objects associated with them.
3. Place each object in the order in 2. Each object is placed by first giving the dimension of the object, then the rotation, and finally calculating the center point coordinates based on where it should be in the scene. The process should take into account the position of the object in the scene, its relative position to the placed objects, and the constraints between the objects. In this step, you need to not only place the object, but also give a detailed reason for placing it so.
4. Organize the answers given in 3. to produce a final output that meets the format requirements.

Here is how the json format output should look:
{
  "prompt": "(The prompt you generate)",
  "response": {
    "Entity Extraction": "(Explanation of the objects extracted from the prompt)",
    "Order Decision": "(Explanation of the order in which the objects should be placed, usually starting with major or large objects in the scene)",
    "Spatial Reasoning": "(Explanation of the dimensions, rotation, and position (i.e. center point) of each object, reasoning about each object should be as detailed as possible and take into account the scene and other objects)",
    "Answer Organization": "(Final output in the required format, using lines like "object {length: ?px; width: ?px; center_x: ?px; center_y: ?px; orientation: ? degrees;}")"
  }
}

BEV layout:
{bev_layout})LFPT";

inline constexpr std::string_view kLifting = R"LFPT(Given a sentence prompt that will be used to generate a scene and the BEV layout of this scene, lifting a 2D layout to a 3D layout (i.e., predicting the range of heights an object occupies in space) and designing a prompt for each object for object asset generation. The generated layout should follow the CSS style, where each line starts with the object description and is followed by its absolute position. Formally, each line should be like "object {length: ?px; width: ?px; height: ?px; center_x: ?px; center_y: ?px; center_z: ?px; orientation: ? degrees;}". The given BEV layout contains information other than height and center_z, so the only information you need to add is about the objects in the z-axis. Be careful not to let objects that don't make sense appear overlapping. For example, chairs can go under tables, so they can overlap. And a lamp must go on top of a table, so they can't overlap. The space is {max_length}px long, {max_width}px wide, and 160px high. Therefore, the height of the bounding box should not exceed {max_height}px, i.e. center_z +/- height/2 needs to be between 0 and {max_height}. At the same time, for each object, prompt for objects should be in one sentence of natural language, describing its category, shape, and style. Finally give a list in the same order as the objects in the layout, like [obj1_prompt, obj2_prompt, ...].

Here is how the json format output should look:
{
  "3D_layout": [
    "bed {length: 88px; width: 40px; height: 36px; center_x: 120px; center_y: 60px; center_z: 18px; orientation: 0 degrees;}",
    ...
  ],
  "object_prompts": [
    "A modern single bed with a rectangular frame and a wooden headboard.",
    ...
  ]
}

Prompt: 
{text_description}
BEV layout:
{bev_layout})LFPT";

inline constexpr std::string_view kQuantEval = R"LFPT(You are an expert assistant who is well versed in indoor scene layout design. As an impartial judge, you are asked to make an in-depth evaluation of a 2D scene layout (BEV layout), which is given by the bounding box of each object in the top view and labeled with the object category near the bounding box. You can refer to the metadata of the layout to make a judgment. You need to judge whether each type of object in the input BEV scene layout is in a reasonable position on each of the following four dimensions:
1. Distance between objects: Evaluate whether objects are spaced appropriately to ensure functionality and accessibility. For example, in organized environments such as classrooms or offices, furniture should be arranged with sufficient separation to allow for easy movement. Desks in a classroom should be spaced out so students can walk between them comfortably, and sofas or desks in offices should not overlap. Note that in a top-down view, some overlap in bounding boxes may be physically reasonable when objects are vertically stacked, such as a ceiling lamp above a bed, or a computer placed on a desk. In such cases, evaluating bounding box intersections alongside height context is essential.
2. Quantitative alignment of objects: Assess whether the quantities of related objects are consistent with functional expectations. For instance, in an office setting, the number of desks and chairs should correspond-each desk should typically be paired with one chair.
3. Size proportion of objects within the scene: Check whether the relative sizes of objects make sense within the spatial layout. For example, equipment such as computers in an office or lab instruments in a laboratory should be smaller than the tables or workbenches they are placed on. Unnatural size ratios, like a monitor larger than its desk, can suggest spatial implausibility.
4. Orientation of objects: Verify that objects are oriented appropriately for their intended use within the layout. For example, chairs in a classroom should face the blackboard, and computer monitors in an office should be directed toward the associated seating positions.

Please note that your choice must be based on a thorough understanding, analysis and evaluation of the image and the problem. After the explanation of each dimension, answer the final evaluation. Finally, return your judgment in a legal JSON format, evaluating Yes if the location of a particular object is considered reasonable in this dimension, and No if it is not. The json format and field definitions are as follows:
{
"object_class_name": ["Yes" or "No", "Yes" or "No", "Yes" or "No", "Yes" or "No"] (four judgments correspond to the previous four dimensions)
...
}
scene description: {scene_description}
max_length: {max_length} px (horizontal axis)
max_width: {max_width} px (vertical axis)
BEV layout:
{bev_layout}
{metadata})LFPT";

inline constexpr std::string_view kSpatialEval = R"LFPT(You are an expert assistant who is well versed in indoor scene layout design. As an impartial judge, you are asked to make an in-depth evaluation of the 2D scene layout (BEV layout), which is given by the bounding box of each object in the top view and labeled with the object category near the bounding box. You can refer to both the picture and the layout metadata for judging. You need to judge whether the information about each kind of object in the input BEV scene layout is reasonable in each of the following three dimensions:
1. Spatial alignment between objects: For example, the podium and projector in a classroom should be centrally aligned either horizontally or vertically, and lockers in locker rooms should be arranged in an orderly grid.
2. Position of the objects within the layout: Consider whether each object's position is appropriate for the overall layout context. For example, in a single office the desk should be near the center, and in a bank the counter should be near a wall.
3. Consistency with Chain-of-Thought Descriptions: The physical placements of objects should align with any provided textual chain-of-thought descriptions. For example, the chain of thought mentions placing the whiteboard next to the wall, but in the picture and digital layout the whiteboard is in the middle of the scene, which is unreasonable.

Please note that your choices must be based on a thorough understanding, analysis, and evaluation of the image and problem. After the explanation of each dimension, answer the final evaluation. Return your judgment at the end of each dimension in a legal JSON format, evaluating Yes if the placement of a particular object is considered reasonable in that dimension, and No if not. The json format and field definitions are as follows:
{
"object_class_name": ["Yes" or "No", "Yes" or "No", "Yes" or "No"] (three judgments correspond to the previous three dimensions)
...
}
scene description: {scene_description}
max_length: {max_length} px (horizontal axis in BEV)
max_width: {max_width} px (vertical axis in BEV)
BEV layout:
{bev_layout}
chain of thought:
{CoT})LFPT";

inline constexpr std::string_view kDescriptionGen = R"LFPT(You are asked to generate indoor scene descriptions at three levels of granularity: coarse, medium, and fine-grained. Please follow the instructions carefully.
There are three types of granularity:
1. Coarse: List the main objects in the room without mentioning where they are.  
   Example: "A home gym with a treadmill, yoga mat, dumbbell rack, water dispenser, and a large mirror."
2. Medium: Describe the approximate spatial relationships between major object groups.  
   Example: "In a playroom, a toy shelf stands against the right wall, a bean bag lies in the corner near the window, and a round play mat is placed in the center."
3. Fine-grained: Provide precise, detailed spatial arrangements among individual objects.  
   Example: "A small square table is placed in the center of the room. On the front right corner of the table sits a red toolbox, with a measuring tape coiled beside it. A yellow stool is tucked in on the left side, and a desk lamp stands at the rear center of the table."

You will generate scene descriptions for {num_scene_types} different indoor scene categories, excluding common categories such as bedroom, living room, dining room, and study.
For each scene category, generate:
{num_coarse_per_type} descriptions at coarse granularity,
{num_medium_per_type} at medium granularity,
{num_fine_per_type} at fine-grained granularity.
Each scene description should be accompanied by room dimensions: length, width, and height (each must be an integer <= 256).

Output the results in a strict json format as follows:
[
  {
    "scene_type": "laundry room",
    "granularity": "coarse",
    "description": "A laundry room with a washing machine, dryer, laundry basket, shelves, and detergent bottles.",
    "room_size": {
      "length": 256,
      "width": 171,
      "height": 240
    }
  },
  ...
])LFPT";

inline constexpr std::string_view kSimpleReward = R"LFPT(You are an expert assistant who is well versed in indoor scene layout design. As an impartial judge, you are asked to make an in-depth evaluation of the 2D scene layout (BEV layout), which is given by the bounding box of each object in the top view and labeled with the object category near the bounding box. You can refer to both the picture and the layout metadata for judging. Please score the scene based on physical plausibility, semantic consistency, and degree of instruction compliance.

Return your answer in legal JSON format. The format and field definitions are as follows:
{
"score": 1-100
}
scene description: {scene_description}
max_length: {max_length} px (horizontal axis in BEV)
max_width: {max_width} px (vertical axis in BEV)
BEV layout:
{bev_layout}
chain of thought:
{CoT})LFPT";

inline constexpr std::string_view kBevGenerate = R"LFPT(Given a scene description and the size of the room, plan a BEV layout for the scene and write out your reasoning before the final answer. The layout follows the CSS style, where each line starts with the object description and is followed by its absolute position. Formally, each line should be like "object {length: ?px; width: ?px; center_x: ?px; center_y: ?px; orientation: ? degrees;}". You can simply interpret the length and width as the dimensions of the object itself, with center_x and center_y indicating translation (or the center point of the object) and orientation indicating rotation. Note that the 0 degrees representation is aligned with the direction of the positive half-axis of the axes where "width" and "center_y" are located. The image is {max_length}px long and {max_width}px wide. Therefore, all bounding boxes should try not to exceed 256px after rotation.

Reason in the following four steps:
1. Extract from the text description which objects should be placed in the scene and how many of each of these are specifically needed.
2. List the order in which to place each type of object, generally starting with the large and major objects, then moving on to the decorative and minor objects associated with them.
3. Place each object in the order in 2. Each object is placed by first giving the dimension of the object, then the rotation, and finally calculating the center point coordinates based on where it should be in the scene. The process should take into account the position of the object in the scene, its relative position to the placed objects, and the constraints between the objects. In this step, you need to not only place the object, but also give a detailed reason for placing it so.
4. Organize the answers given in 3. to produce a final output that meets the format requirements.

Here is how the json format output should look:
{
  "prompt": "(Restate the scene description)",
  "response": {
    "Entity Extraction": "(Explanation of the objects extracted from the prompt)",
    "Order Decision": "(Explanation of the order in which the objects should be placed, usually starting with major or large objects in the scene)",
    "Spatial Reasoning": "(Explanation of the dimensions, rotation, and position (i.e. center point) of each object, reasoning about each object should be as detailed as possible and take into account the scene and other objects)",
    "Answer Organization": "(Final output in the required format, using lines like "object {length: ?px; width: ?px; center_x: ?px; center_y: ?px; orientation: ? degrees;}")"
  }
}

Scene description:
{description})LFPT";

inline constexpr std::string_view kAlignmentFeedback = R"LFPT(The layout below was produced earlier and has been reviewed. Here is the current layout:
{previous_layout}

Evaluator feedback:
{feedback}

Revise the layout so that every piece of feedback is addressed. Keep every object that received no feedback unchanged, keep the object order, and keep the output format identical to the original task.)LFPT";

/// Appended to the evaluator prompts during the alignment loop so the
/// judges return object-level revision suggestions next to their verdicts.
inline constexpr std::string_view kSuggestionRequest = R"LFPT(

In addition to the judgments, include a "suggestions" field in the same JSON object: a list with one entry per problem you found, each like {"object": "<class name or zero-based index>", "criterion": <1-7>, "aspect": "position" | "size" | "orientation" | "height" | "count", "instruction": "<one short sentence>", "proposed": {"length": ?, "width": ?, "height": ?, "center_x": ?, "center_y": ?, "center_z": ?, "orientation": ?}}. Include only the "proposed" keys you want to change, or omit "proposed" entirely. If nothing needs to change, use "suggestions": [].)LFPT";

}  // namespace prompt_bodies

struct PromptTemplate {
  TemplateId id;
  std::string_view name;
  std::string_view body;
  std::vector<std::string_view> placeholders;
};

inline const std::vector<PromptTemplate>& prompt_templates() {
  static const std::vector<PromptTemplate> templates = {
      {TemplateId::cot_datagen,
       "cot_datagen",
       prompt_bodies::kCotDatagen,
       {"max_length", "max_width", "bev_layout"}},
      {TemplateId::lifting,
       "lifting",
       prompt_bodies::kLifting,
       {"max_length", "max_width", "max_height", "text_description",
        "bev_layout"}},
      {TemplateId::quant_eval,
       "quant_eval",
       prompt_bodies::kQuantEval,
       {"scene_description", "max_length", "max_width", "bev_layout",
        "metadata"}},
      {TemplateId::spatial_eval,
       "spatial_eval",
       prompt_bodies::kSpatialEval,
       {"scene_description", "max_length", "max_width", "bev_layout", "CoT"}},
      {TemplateId::description_gen,
       "description_gen",
       prompt_bodies::kDescriptionGen,
       {"num_scene_types", "num_coarse_per_type", "num_medium_per_type",
        "num_fine_per_type"}},
      {TemplateId::simple_reward,
       "simple_reward",
       prompt_bodies::kSimpleReward,
       {"scene_description", "max_length", "max_width", "bev_layout", "CoT"}},
      {TemplateId::bev_generate,
       "bev_generate",
       prompt_bodies::kBevGenerate,
       {"description", "max_length", "max_width"}},
      {TemplateId::alignment_feedback,
       "alignment_feedback",
       prompt_bodies::kAlignmentFeedback,
       {"previous_layout", "feedback"}},
  };
  return templates;
}

inline const PromptTemplate& get_template(TemplateId id) {
  for (const auto& t : prompt_templates()) {
    if (t.id == id) return t;
  }
  throw Error("unknown template id");
}

inline const PromptTemplate* find_template(std::string_view name) {
  for (const auto& t : prompt_templates()) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

/// Substitutes every `{name}` occurrence for each declared placeholder with
/// its binding, byte-exactly and without escaping. Throws UnboundPlaceholder
/// when a declared placeholder has no binding.
inline std::string render_prompt(
    TemplateId id, const std::map<std::string, std::string>& bindings) {
  const PromptTemplate& tpl = get_template(id);
  std::string out(tpl.body);
  for (std::string_view name : tpl.placeholders) {
    auto it = bindings.find(std::string(name));
    if (it == bindings.end()) throw UnboundPlaceholder(std::string(name));
    std::string slot = "{" + std::string(name) + "}";
    std::size_t pos = 0;
    while ((pos = out.find(slot, pos)) != std::string::npos) {
      out.replace(pos, slot.size(), it->second);
      pos += it->second.size();
    }
  }
  return out;
}

}  // namespace layoutforge
